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

#include "netsurv/cox_ph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "netsurv/design.hpp"
#include "netsurv/errors.hpp"
#include "netsurv/kaplan_meier.hpp"
#include "netsurv/kernels.hpp"
#include "netsurv/special.hpp"

namespace netsurv {

namespace {

struct SortedData {
    std::vector<std::size_t> order;  // record indices, time ascending
    Eigen::MatrixXd x;               // n x p, rows in sorted order
    std::vector<double> time;        // sorted ascending
    std::vector<bool> event;
};

SortedData sort_cohort(const Cohort& cohort, const DesignMatrix& design) {
    SortedData data;
    const std::size_t n = cohort.size();
    data.order.resize(n);
    std::iota(data.order.begin(), data.order.end(), std::size_t{0});
    std::sort(data.order.begin(), data.order.end(), [&cohort](std::size_t a, std::size_t b) {
        return cohort.records()[a].duration < cohort.records()[b].duration;
    });
    const std::size_t p = design.width();
    data.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    data.time.resize(n);
    data.event.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = data.order[i];
        data.time[i] = cohort.records()[src].duration;
        data.event[i] = cohort.records()[src].event;
        for (std::size_t j = 0; j < p; ++j) {
            data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                design.columns[j][src];
        }
    }
    return data;
}

// One pass over the risk sets, time descending.  Returns log PL and,
// when requested, the score vector and observed information.
struct Evaluation {
    double loglik = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd score;
    Eigen::MatrixXd information;
};

Evaluation evaluate_partial_likelihood(const SortedData& data, const Eigen::VectorXd& beta,
                                       TiesMethod ties, bool need_derivatives) {
    const std::size_t n = data.time.size();
    const Eigen::Index p = beta.size();
    Evaluation out;
    if (need_derivatives) {
        out.score = Eigen::VectorXd::Zero(p);
        out.information = Eigen::MatrixXd::Zero(p, p);
    }
    double loglik = 0.0;

    // all risk scores in one vectorized pass
    std::vector<double> linear(n);
    std::vector<double> risk_scores(n);
    Eigen::Map<Eigen::VectorXd>(linear.data(), static_cast<Eigen::Index>(n)) =
        data.x * beta;
    kernels::vexp(linear, risk_scores);

    double s0 = 0.0;
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);

    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1;
    while (i >= 0) {
        const double t = data.time[static_cast<std::size_t>(i)];
        double s0d = 0.0;
        Eigen::VectorXd s1d = Eigen::VectorXd::Zero(p);
        Eigen::MatrixXd s2d = Eigen::MatrixXd::Zero(p, p);
        double eta_deaths = 0.0;
        Eigen::VectorXd x_deaths = Eigen::VectorXd::Zero(p);
        std::size_t d = 0;
        while (i >= 0 && data.time[static_cast<std::size_t>(i)] == t) {
            const auto row = data.x.row(static_cast<Eigen::Index>(i));
            const double eta = linear[static_cast<std::size_t>(i)];
            const double risk = risk_scores[static_cast<std::size_t>(i)];
            s0 += risk;
            if (need_derivatives) {
                s1.noalias() += risk * row.transpose();
                s2.noalias() += risk * (row.transpose() * row);
            }
            if (data.event[static_cast<std::size_t>(i)]) {
                ++d;
                eta_deaths += eta;
                s0d += risk;
                if (need_derivatives) {
                    x_deaths += row.transpose();
                    s1d.noalias() += risk * row.transpose();
                    s2d.noalias() += risk * (row.transpose() * row);
                }
            }
            --i;
        }
        if (d == 0) continue;

        loglik += eta_deaths;
        const double dd = static_cast<double>(d);
        if (ties == TiesMethod::Breslow) {
            loglik -= dd * std::log(s0);
            if (need_derivatives) {
                const Eigen::VectorXd mean = s1 / s0;
                out.score.noalias() += x_deaths - dd * mean;
                out.information.noalias() += dd * (s2 / s0 - mean * mean.transpose());
            }
        } else {
            for (std::size_t k = 0; k < d; ++k) {
                const double frac = static_cast<double>(k) / dd;
                const double denom = s0 - frac * s0d;
                loglik -= std::log(denom);
                if (need_derivatives) {
                    const Eigen::VectorXd m1 = (s1 - frac * s1d) / denom;
                    out.score.noalias() += -m1;
                    out.information.noalias() +=
                        (s2 - frac * s2d) / denom - m1 * m1.transpose();
                }
            }
            if (need_derivatives) out.score.noalias() += x_deaths;
        }
    }
    out.loglik = loglik;
    return out;
}

struct Standardization {
    std::vector<double> mean;
    std::vector<double> scale;
};

Standardization standardize(Eigen::MatrixXd& x, const std::vector<std::string>& names) {
    Standardization s;
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    s.mean.resize(static_cast<std::size_t>(p));
    s.scale.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const double mean = x.col(j).mean();
        const double ss = (x.col(j).array() - mean).square().sum();
        const double sd = std::sqrt(ss / std::max<double>(1.0, static_cast<double>(n - 1)));
        if (!(sd > 0.0)) {
            throw ModelError("covariate column '" + names[static_cast<std::size_t>(j)] +
                             "' is constant; design is rank deficient");
        }
        x.col(j) = (x.col(j).array() - mean) / sd;
        s.mean[static_cast<std::size_t>(j)] = mean;
        s.scale[static_cast<std::size_t>(j)] = sd;
    }
    return s;
}

void check_full_rank(const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) {
        // the weakest pivot points at the offending column
        const auto perm = qr.colsPermutation().indices();
        const std::size_t suspect = static_cast<std::size_t>(perm(x.cols() - 1));
        throw ModelError("design matrix is rank deficient (column '" + names[suspect] + "')");
    }
}

}  // namespace

TiesMethod parse_ties(std::string_view text) {
    if (text == "efron") return TiesMethod::Efron;
    if (text == "breslow") return TiesMethod::Breslow;
    throw UsageError("unknown ties method '" + std::string(text) +
                     "' (expected efron or breslow)");
}

std::string ties_name(TiesMethod ties) {
    return ties == TiesMethod::Efron ? "efron" : "breslow";
}

double CoxFit::std_error(std::size_t column) const {
    return std::sqrt(vcov(static_cast<Eigen::Index>(column), static_cast<Eigen::Index>(column)));
}

double CoxFit::z_statistic(std::size_t column) const {
    return beta(static_cast<Eigen::Index>(column)) / std_error(column);
}

double CoxFit::p_value(std::size_t column) const {
    return special::wald_p_value(z_statistic(column));
}

CoxFit cox_fit(const Cohort& cohort, const std::vector<std::string>& variables,
               TiesMethod ties) {
    if (cohort.empty()) throw DataError("cannot fit a Cox model on an empty cohort");
    if (cohort.event_count() == 0) {
        throw DataError("Cox model needs at least one event");
    }
    DesignMatrix design = build_design(cohort, variables);
    SortedData data = sort_cohort(cohort, design);

    std::vector<std::string> names;
    names.reserve(design.meta.size());
    for (const auto& m : design.meta) names.push_back(m.name);

    const Standardization standardization = standardize(data.x, names);
    check_full_rank(data.x, names);

    const Eigen::Index p = static_cast<Eigen::Index>(design.width());
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Evaluation current = evaluate_partial_likelihood(data, beta, ties, true);
    const double loglik0 = current.loglik;

    constexpr double kTolerance = 1e-9;
    constexpr int kMaxIterations = 100;
    constexpr double kMaxStepNorm = 1e3;
    // a standardized coefficient this large means the partial likelihood
    // is monotone (perfect separation); the asymptote would otherwise be
    // approached quietly until the step tolerance fired
    constexpr double kDivergenceBound = 50.0;
    int iteration = 0;
    for (; iteration < kMaxIterations; ++iteration) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(current.information);
        if (ldlt.info() != Eigen::Success) {
            throw ModelError("information matrix is singular; design is rank deficient");
        }
        Eigen::VectorXd delta = ldlt.solve(current.score);
        if (!delta.allFinite()) {
            throw ModelError("information matrix is singular; design is rank deficient");
        }
        if (delta.lpNorm<Eigen::Infinity>() > kMaxStepNorm) {
            Eigen::Index worst = 0;
            delta.cwiseAbs().maxCoeff(&worst);
            throw ConvergenceError(
                "partial likelihood appears monotone in '" +
                names[static_cast<std::size_t>(worst)] +
                "' (diverging estimate); remove or recode the covariate");
        }

        double step = 1.0;
        Eigen::VectorXd candidate;
        Evaluation next;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            candidate = beta + step * delta;
            next = evaluate_partial_likelihood(data, candidate, ties, false);
            if (std::isfinite(next.loglik) && next.loglik >= current.loglik - 1e-13) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            throw ConvergenceError("step halving failed at iteration " +
                                   std::to_string(iteration + 1) + " (log PL " +
                                   std::to_string(current.loglik) + ")");
        }
        const double previous = current.loglik;
        beta = candidate;
        if (beta.lpNorm<Eigen::Infinity>() > kDivergenceBound) {
            Eigen::Index worst = 0;
            beta.cwiseAbs().maxCoeff(&worst);
            throw ConvergenceError(
                "partial likelihood appears monotone in '" +
                names[static_cast<std::size_t>(worst)] +
                "' (estimate diverging); remove or recode the covariate");
        }
        current = evaluate_partial_likelihood(data, beta, ties, true);
        if (std::fabs(1.0 - previous / current.loglik) < kTolerance ||
            std::fabs(current.loglik - previous) < 1e-12) {
            ++iteration;
            break;
        }
    }
    if (iteration >= kMaxIterations) {
        throw ConvergenceError("Newton-Raphson did not converge in " +
                               std::to_string(kMaxIterations) + " iterations (last log PL " +
                               std::to_string(current.loglik) + ", score norm " +
                               std::to_string(current.score.norm()) + ")");
    }

    CoxFit fit;
    fit.variables = variables;
    fit.column_names = names;
    fit.ties = ties;
    fit.n = cohort.size();
    fit.events = cohort.event_count();
    fit.data_digest = cohort.data_digest();
    fit.loglik0 = loglik0;
    fit.loglik = current.loglik;
    fit.iterations = iteration;

    // back to original scale: beta_orig_j = b_j / sd_j
    fit.beta.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        fit.beta(j) = beta(j) / standardization.scale[static_cast<std::size_t>(j)];
    }
    Eigen::MatrixXd d_scale = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        d_scale(j, j) = standardization.scale[static_cast<std::size_t>(j)];
    }
    fit.information = d_scale * current.information * d_scale;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(current.information);
    const Eigen::MatrixXd vcov_std = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd d_inv = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) d_inv(j, j) = 1.0 / d_scale(j, j);
    fit.vcov = d_inv * vcov_std * d_inv;
    if (!fit.vcov.allFinite()) {
        throw ModelError("variance estimate is singular at the optimum");
    }
    return fit;
}

TimeTransform parse_transform(std::string_view text) {
    if (text == "km") return TimeTransform::Km;
    if (text == "identity") return TimeTransform::Identity;
    if (text == "rank") return TimeTransform::Rank;
    if (text == "log") return TimeTransform::Log;
    throw UsageError("unknown transform '" + std::string(text) +
                     "' (expected km, identity, rank, or log)");
}

std::string transform_name(TimeTransform transform) {
    switch (transform) {
        case TimeTransform::Km:
            return "km";
        case TimeTransform::Identity:
            return "identity";
        case TimeTransform::Rank:
            return "rank";
        case TimeTransform::Log:
            return "log";
    }
    return "?";
}

SchoenfeldResiduals schoenfeld_residuals(const CoxFit& fit, const Cohort& cohort) {
    if (cohort.data_digest() != fit.data_digest || cohort.size() != fit.n) {
        throw UsageError("cohort does not match the fitted model");
    }
    DesignMatrix design = build_design(cohort, fit.variables);
    SortedData data = sort_cohort(cohort, design);
    const Eigen::Index p = static_cast<Eigen::Index>(design.width());
    const std::size_t n = cohort.size();

    SchoenfeldResiduals out;
    out.residuals.resize(static_cast<Eigen::Index>(fit.events), p);
    out.times.resize(fit.events);

    // backward pass over risk sets at the fitted beta (original scale)
    double s0 = 0.0;
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
    std::vector<std::pair<double, Eigen::VectorXd>> rows;  // (time, residual), newest first
    rows.reserve(fit.events);

    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1;
    while (i >= 0) {
        const double t = data.time[static_cast<std::size_t>(i)];
        double s0d = 0.0;
        Eigen::VectorXd s1d = Eigen::VectorXd::Zero(p);
        std::vector<Eigen::VectorXd> x_deaths;
        while (i >= 0 && data.time[static_cast<std::size_t>(i)] == t) {
            const auto row = data.x.row(static_cast<Eigen::Index>(i));
            const double risk = std::exp(row.dot(fit.beta));
            s0 += risk;
            s1.noalias() += risk * row.transpose();
            if (data.event[static_cast<std::size_t>(i)]) {
                s0d += risk;
                s1d.noalias() += risk * row.transpose();
                x_deaths.push_back(row.transpose());
            }
            --i;
        }
        const std::size_t d = x_deaths.size();
        if (d == 0) continue;
        const double dd = static_cast<double>(d);
        for (std::size_t k = 0; k < d; ++k) {
            Eigen::VectorXd mean(p);
            if (fit.ties == TiesMethod::Breslow) {
                mean = s1 / s0;
            } else {
                const double frac = static_cast<double>(k) / dd;
                mean = (s1 - frac * s1d) / (s0 - frac * s0d);
            }
            rows.emplace_back(t, x_deaths[k] - mean);
        }
    }

    // rows were built newest-first; flip to time-ascending
    std::reverse(rows.begin(), rows.end());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.times[k] = rows[k].first;
        out.residuals.row(static_cast<Eigen::Index>(k)) = rows[k].second.transpose();
    }
    return out;
}

PhTestResult ph_test(const CoxFit& fit, const Cohort& cohort, TimeTransform transform) {
    if (cohort.event_count() == 0) throw DataError("proportional-hazards test needs events");
    const SchoenfeldResiduals residuals = schoenfeld_residuals(fit, cohort);
    const std::size_t d = residuals.times.size();
    const Eigen::Index p = residuals.residuals.cols();

    // transform of the event times
    Eigen::VectorXd g(static_cast<Eigen::Index>(d));
    switch (transform) {
        case TimeTransform::Identity:
            for (std::size_t k = 0; k < d; ++k) g(static_cast<Eigen::Index>(k)) = residuals.times[k];
            break;
        case TimeTransform::Log:
            for (std::size_t k = 0; k < d; ++k) {
                if (!(residuals.times[k] > 0.0)) {
                    throw UsageError("log time transform requires positive event times");
                }
                g(static_cast<Eigen::Index>(k)) = std::log(residuals.times[k]);
            }
            break;
        case TimeTransform::Rank: {
            // average rank over tied event times
            std::size_t k = 0;
            while (k < d) {
                std::size_t j = k;
                while (j < d && residuals.times[j] == residuals.times[k]) ++j;
                const double avg = 0.5 * static_cast<double>(k + j - 1) + 1.0;
                for (std::size_t m = k; m < j; ++m) g(static_cast<Eigen::Index>(m)) = avg;
                k = j;
            }
            break;
        }
        case TimeTransform::Km: {
            // survival just before each event time, from the pooled KM curve
            const SurvivalCurve curve = km_fit(cohort);
            for (std::size_t k = 0; k < d; ++k) {
                double before = 1.0;
                for (const auto& step : curve.steps) {
                    if (step.time >= residuals.times[k]) break;
                    before = step.survival;
                }
                g(static_cast<Eigen::Index>(k)) = before;
            }
            break;
        }
    }

    const double g_mean = g.mean();
    const Eigen::VectorXd g_centered = g.array() - g_mean;
    const double g_ss = g_centered.squaredNorm();
    if (!(g_ss > 0.0)) {
        throw ModelError("time transform is constant over the events; test is degenerate");
    }

    const Eigen::VectorXd u = residuals.residuals.transpose() * g_centered;
    const Eigen::VectorXd vu = fit.vcov * u;
    const double dd = static_cast<double>(d);

    PhTestResult result;
    result.transform = transform;
    result.columns.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const double vjj = fit.vcov(j, j);
        if (!(vjj > 0.0)) throw ModelError("singular residual covariance");
        auto& column = result.columns[static_cast<std::size_t>(j)];
        column.name = fit.column_names[static_cast<std::size_t>(j)];
        column.chi_square = dd * vu(j) * vu(j) / (vjj * g_ss);
        column.p_value = special::chi_square_sf(column.chi_square, 1.0);
    }
    result.global_chi_square = std::max(0.0, dd * u.dot(vu) / g_ss);
    result.global_df = static_cast<std::size_t>(p);
    result.global_p = special::chi_square_sf(result.global_chi_square,
                                             static_cast<double>(result.global_df));
    return result;
}

}  // namespace netsurv
