/*
 * Copyright (c) 2026, the netsurv authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "netsurv/rank_tests.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "netsurv/errors.hpp"
#include "netsurv/special.hpp"

namespace netsurv {

namespace {

std::string format_full(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Quadratic form v' V^- v on the system with one group dropped.
// Falls back to an eigenvalue pseudo-inverse when the reduced
// covariance is singular.
double quadratic_form(const Eigen::VectorXd& v, const Eigen::MatrixXd& V) {
    const Eigen::Index m = v.size() - 1;
    if (m <= 0) return 0.0;
    const Eigen::VectorXd vr = v.head(m);
    const Eigen::MatrixXd Vr = V.topLeftCorner(m, m);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(Vr);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Eigen::VectorXd x = ldlt.solve(vr);
        const double residual = (Vr * x - vr).norm();
        if (residual <= 1e-8 * (1.0 + vr.norm())) {
            return std::max(0.0, vr.dot(x));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Vr);
    const Eigen::VectorXd& eigenvalues = es.eigenvalues();
    const double cutoff = 1e-12 * std::max(1e-300, eigenvalues.cwiseAbs().maxCoeff());
    const Eigen::VectorXd proj = es.eigenvectors().transpose() * vr;
    double q = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues(i) > cutoff) q += proj(i) * proj(i) / eigenvalues(i);
    }
    return std::max(0.0, q);
}

}  // namespace

WeightSpec WeightSpec::fleming_harrington(double rho, double gamma) {
    if (!(rho >= 0.0) || !(gamma >= 0.0) || !std::isfinite(rho) || !std::isfinite(gamma)) {
        throw UsageError("Fleming-Harrington weights require finite rho, gamma >= 0");
    }
    return {Kind::FlemingHarrington, rho, gamma};
}

WeightSpec WeightSpec::parse(std::string_view text, double rho, double gamma) {
    if (text == "logrank" || text == "log-rank") return log_rank();
    if (text == "gehan" || text == "wilcoxon" || text == "gehan-wilcoxon") return gehan();
    if (text == "peto" || text == "peto-peto") return peto_peto();
    if (text == "fh" || text == "fleming-harrington") return fleming_harrington(rho, gamma);
    throw UsageError("unknown weight '" + std::string(text) +
                     "' (expected logrank, gehan, peto, or fh)");
}

std::string WeightSpec::label() const {
    switch (kind) {
        case Kind::LogRank:
            return "logrank";
        case Kind::Gehan:
            return "gehan";
        case Kind::PetoPeto:
            return "peto";
        case Kind::FlemingHarrington: {
            std::string s = "fh(";
            s += format_full(rho);
            s += ",";
            s += format_full(gamma);
            s += ")";
            return s;
        }
    }
    return "?";
}

RankTestResult weighted_logrank(const Cohort& cohort, std::string_view variable,
                                const WeightSpec& weight) {
    const std::size_t var_index = cohort.schema().require(variable);
    const auto& covariate = cohort.schema().at(var_index);
    if (covariate.kind != CovariateKind::Categorical) {
        throw UsageError("covariate '" + std::string(variable) + "' is not categorical");
    }

    // Keep only non-empty levels, preserving declared order.
    const std::size_t n_levels = covariate.levels.size();
    std::vector<std::size_t> level_count(n_levels, 0);
    for (const auto& r : cohort.records()) {
        ++level_count[static_cast<std::size_t>(r.covariates[var_index])];
    }
    std::vector<std::size_t> group_of_level(n_levels, SIZE_MAX);
    std::vector<std::size_t> group_levels;
    for (std::size_t l = 0; l < n_levels; ++l) {
        if (level_count[l] > 0) {
            group_of_level[l] = group_levels.size();
            group_levels.push_back(l);
        }
    }
    const std::size_t k = group_levels.size();
    if (k < 2) {
        throw UsageError("weighted log-rank test needs at least 2 non-empty levels of '" +
                         std::string(variable) + "'");
    }
    if (cohort.event_count() == 0) {
        throw DataError("weighted log-rank test needs at least one event");
    }

    struct Obs {
        double time;
        bool event;
        std::size_t group;
    };
    std::vector<Obs> obs;
    obs.reserve(cohort.size());
    for (const auto& r : cohort.records()) {
        obs.push_back({r.duration, r.event,
                       group_of_level[static_cast<std::size_t>(r.covariates[var_index])]});
    }
    std::sort(obs.begin(), obs.end(),
              [](const Obs& a, const Obs& b) { return a.time < b.time; });

    Eigen::VectorXd score = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    Eigen::MatrixXd covariance =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    std::vector<std::size_t> at_risk(k);
    for (std::size_t g = 0; g < k; ++g) at_risk[g] = level_count[group_levels[g]];
    std::vector<std::size_t> deaths(k, 0);
    std::vector<std::size_t> removed(k, 0);
    std::vector<std::size_t> observed_total(k, 0);
    std::vector<double> expected_total(k, 0.0);

    double pooled_km = 1.0;       // S-hat just before the current time
    double peto_survival = 1.0;   // modified estimator including current time
    std::size_t pooled_at_risk = cohort.size();

    std::size_t i = 0;
    while (i < obs.size()) {
        const double t = obs[i].time;
        std::fill(deaths.begin(), deaths.end(), 0);
        std::fill(removed.begin(), removed.end(), 0);
        std::size_t d_total = 0;
        while (i < obs.size() && obs[i].time == t) {
            ++removed[obs[i].group];
            if (obs[i].event) {
                ++deaths[obs[i].group];
                ++d_total;
            }
            ++i;
        }
        if (d_total > 0) {
            const double n_i = static_cast<double>(pooled_at_risk);
            const double d_i = static_cast<double>(d_total);
            peto_survival *= 1.0 - d_i / (n_i + 1.0);

            double w = 1.0;
            switch (weight.kind) {
                case WeightSpec::Kind::LogRank:
                    w = 1.0;
                    break;
                case WeightSpec::Kind::Gehan:
                    w = n_i;
                    break;
                case WeightSpec::Kind::PetoPeto:
                    w = peto_survival;
                    break;
                case WeightSpec::Kind::FlemingHarrington:
                    w = std::pow(pooled_km, weight.rho) *
                        std::pow(1.0 - pooled_km, weight.gamma);
                    break;
            }

            const double hyper =
                pooled_at_risk > 1
                    ? d_i * (n_i - d_i) / (n_i - 1.0)
                    : 0.0;
            for (std::size_t g = 0; g < k; ++g) {
                const double n_g = static_cast<double>(at_risk[g]);
                const double e_g = n_g * d_i / n_i;
                observed_total[g] += deaths[g];
                expected_total[g] += e_g;
                score(static_cast<Eigen::Index>(g)) +=
                    w * (static_cast<double>(deaths[g]) - e_g);
                for (std::size_t h = 0; h <= g; ++h) {
                    const double n_h = static_cast<double>(at_risk[h]);
                    const double delta = g == h ? 1.0 : 0.0;
                    const double v =
                        w * w * (n_g / n_i) * (delta - n_h / n_i) * hyper;
                    covariance(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h)) += v;
                    if (g != h) {
                        covariance(static_cast<Eigen::Index>(h),
                                   static_cast<Eigen::Index>(g)) += v;
                    }
                }
            }
            pooled_km *= 1.0 - d_i / n_i;
        }
        for (std::size_t g = 0; g < k; ++g) at_risk[g] -= removed[g];
        std::size_t removed_total = 0;
        for (std::size_t g = 0; g < k; ++g) removed_total += removed[g];
        pooled_at_risk -= removed_total;
    }

    RankTestResult result;
    result.weight = weight;
    result.df = k - 1;
    result.chi_square = quadratic_form(score, covariance);
    result.p_value = special::chi_square_sf(result.chi_square, static_cast<double>(result.df));
    result.groups.reserve(k);
    for (std::size_t g = 0; g < k; ++g) {
        result.groups.push_back(GroupEventStats{covariate.levels[group_levels[g]],
                                                level_count[group_levels[g]],
                                                observed_total[g], expected_total[g]});
    }
    return result;
}

std::vector<double> bh_adjust(const std::vector<double>& p_values) {
    for (const double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw UsageError("bh_adjust: p-values must lie in [0, 1]");
        }
    }
    const std::size_t m = p_values.size();
    if (m == 0) return {};
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&p_values](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    std::vector<double> adjusted(m);
    double running_min = 1.0;
    for (std::size_t rank = m; rank >= 1; --rank) {
        const std::size_t idx = order[rank - 1];
        const double candidate =
            p_values[idx] * static_cast<double>(m) / static_cast<double>(rank);
        running_min = std::min(running_min, std::min(candidate, 1.0));
        // the minimum is >= p mathematically; guard the last-ulp rounding
        adjusted[idx] = std::max(running_min, p_values[idx]);
    }
    return adjusted;
}

std::size_t PairwiseMatrix::pair_index(std::size_t i, std::size_t j) const {
    if (i == j || i >= levels.size() || j >= levels.size()) {
        throw UsageError("pairwise matrix: invalid level pair");
    }
    if (i > j) std::swap(i, j);
    // upper-triangle row-major offset
    const std::size_t k = levels.size();
    return i * k - i * (i + 1) / 2 + (j - i - 1);
}

double PairwiseMatrix::raw_at(std::size_t i, std::size_t j) const {
    return raw[pair_index(i, j)];
}

double PairwiseMatrix::adjusted_at(std::size_t i, std::size_t j) const {
    return adjusted[pair_index(i, j)];
}

PairwiseMatrix pairwise_tests(const Cohort& cohort, std::string_view variable,
                              const WeightSpec& weight) {
    const std::size_t var_index = cohort.schema().require(variable);
    const auto& covariate = cohort.schema().at(var_index);
    if (covariate.kind != CovariateKind::Categorical) {
        throw UsageError("covariate '" + std::string(variable) + "' is not categorical");
    }

    auto parts = split_by_level(cohort, variable);
    std::vector<std::pair<std::string, Cohort>> filled;
    for (auto& part : parts) {
        if (!part.second.empty()) filled.push_back(std::move(part));
    }
    if (filled.size() < 2) {
        throw UsageError("pairwise comparisons need at least 2 non-empty levels");
    }

    PairwiseMatrix matrix;
    matrix.weight = weight;
    for (const auto& [level, sub] : filled) matrix.levels.push_back(level);

    const std::size_t k = filled.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            std::vector<SurvivalRecord> records = filled[i].second.records();
            records.insert(records.end(), filled[j].second.records().begin(),
                           filled[j].second.records().end());
            Cohort pair(cohort.schema(), std::move(records));
            matrix.raw.push_back(weighted_logrank(pair, variable, weight).p_value);
        }
    }
    matrix.adjusted = bh_adjust(matrix.raw);
    return matrix;
}

void write_pairwise_csv(std::ostream& out, const PairwiseMatrix& matrix, bool adjusted) {
    const auto& values = adjusted ? matrix.adjusted : matrix.raw;
    const std::size_t k = matrix.levels.size();
    out << "level";
    for (std::size_t j = 0; j + 1 < k; ++j) out << ',' << matrix.levels[j];
    out << '\n';
    for (std::size_t i = 1; i < k; ++i) {
        out << matrix.levels[i];
        for (std::size_t j = 0; j + 1 < k; ++j) {
            out << ',';
            if (j < i) out << format_full(values[matrix.pair_index(j, i)]);
        }
        out << '\n';
    }
}

}  // namespace netsurv
