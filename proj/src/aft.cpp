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

#include "netsurv/aft.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "netsurv/errors.hpp"
#include "netsurv/kernels.hpp"
#include "netsurv/special.hpp"

namespace netsurv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-record first and second derivatives of the log density (events)
// or log survival (censored) with respect to z.  h < 0 everywhere for
// all three laws, which keeps the Hessian negative definite.
struct ZDerivatives {
    double value;  // log f_W(z) or log S_W(z)
    double g;      // d/dz
    double h;      // d^2/dz^2
};

ZDerivatives extreme_value_event(double z, double ez) {
    return {z - ez, 1.0 - ez, -ez};
}
ZDerivatives extreme_value_censored(double /*z*/, double ez) {
    return {-ez, -ez, -ez};
}
ZDerivatives logistic_event(double z, double ez) {
    const double pp = std::isinf(ez) ? 1.0 : ez / (1.0 + ez);
    const double log1pez = z > 35.0 ? z : std::log1p(ez);
    return {z - 2.0 * log1pez, 1.0 - 2.0 * pp, -2.0 * pp * (1.0 - pp)};
}
ZDerivatives logistic_censored(double z, double ez) {
    const double pp = std::isinf(ez) ? 1.0 : ez / (1.0 + ez);
    const double log1pez = z > 35.0 ? z : std::log1p(ez);
    return {-log1pez, -pp, -pp * (1.0 - pp)};
}
ZDerivatives normal_event(double z, double /*ez*/) {
    return {-0.5 * z * z - 0.9189385332046727, -z, -1.0};
}
ZDerivatives normal_censored(double z, double /*ez*/) {
    const double m = special::normal_hazard(z);
    return {special::log_normal_sf(z), -m, -m * (m - z)};
}

using DerivFn = ZDerivatives (*)(double, double);

struct LawFns {
    DerivFn event;
    DerivFn censored;
    bool needs_exp;  // whether exp(z) feeds the formulas
};

LawFns law_functions(ErrorLaw law) {
    switch (law) {
        case ErrorLaw::ExtremeValue:
            return {extreme_value_event, extreme_value_censored, true};
        case ErrorLaw::Logistic:
            return {logistic_event, logistic_censored, true};
        case ErrorLaw::Normal:
            return {normal_event, normal_censored, false};
    }
    throw std::logic_error("unreachable");
}

// W standard deviation per law, for the moment-based start.
double law_sd(ErrorLaw law) {
    switch (law) {
        case ErrorLaw::ExtremeValue:
            return 1.2825498301618641;  // pi / sqrt(6)
        case ErrorLaw::Logistic:
            return 1.8137993642342178;  // pi / sqrt(3)
        case ErrorLaw::Normal:
            return 1.0;
    }
    return 1.0;
}

struct Workspace {
    std::vector<double> log_time;
    std::vector<bool> event;
    Eigen::MatrixXd x;  // standardized, n x p
    std::vector<std::vector<double>> x_cols;
    std::vector<double> eta;
    std::vector<double> z;
    std::vector<double> ez;
    std::vector<double> g;
    std::vector<double> h;
    std::vector<double> gz;  // g + h*z, reused for cross terms
};

struct Objective {
    double loglik = kNegInf;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

// theta = (mu, b_1..b_p [, r = log sigma]); the scale coordinate is
// dropped when sigma is fixed.
Objective evaluate(Workspace& w, const LawFns& law, const Eigen::VectorXd& theta,
                   bool free_scale, double fixed_sigma, bool need_derivatives) {
    const std::size_t n = w.log_time.size();
    const std::size_t p = w.x_cols.size();
    const double mu = theta(0);
    const double sigma = free_scale ? std::exp(theta(theta.size() - 1)) : fixed_sigma;
    const double inv_sigma = 1.0 / sigma;

    std::fill(w.eta.begin(), w.eta.end(), mu);
    for (std::size_t j = 0; j < p; ++j) {
        kernels::axpy(theta(static_cast<Eigen::Index>(j + 1)), w.x_cols[j], w.eta);
    }
    kernels::sub_scale(w.log_time, w.eta, inv_sigma, w.z);
    if (law.needs_exp) kernels::vexp(w.z, w.ez);

    double loglik = 0.0;
    const double log_sigma = std::log(sigma);
    for (std::size_t i = 0; i < n; ++i) {
        const double ez = law.needs_exp ? w.ez[i] : 0.0;
        const ZDerivatives d =
            w.event[i] ? law.event(w.z[i], ez) : law.censored(w.z[i], ez);
        if (w.event[i]) {
            loglik += d.value - log_sigma - w.log_time[i];
        } else {
            loglik += d.value;
        }
        w.g[i] = d.g;
        w.h[i] = d.h;
    }

    Objective out;
    out.loglik = loglik;
    if (!need_derivatives || !std::isfinite(loglik)) return out;

    const Eigen::Index m = theta.size();
    out.gradient = Eigen::VectorXd::Zero(m);
    out.hessian = Eigen::MatrixXd::Zero(m, m);

    const double sum_g = kernels::sum(w.g);
    const double sum_h = kernels::sum(w.h);
    const double dot_gz = kernels::dot(w.g, w.z);
    const double dot_hz = kernels::dot(w.h, w.z);

    out.gradient(0) = -inv_sigma * sum_g;
    for (std::size_t j = 0; j < p; ++j) {
        out.gradient(static_cast<Eigen::Index>(j + 1)) =
            -inv_sigma * kernels::dot(w.g, w.x_cols[j]);
    }
    out.hessian(0, 0) = inv_sigma * inv_sigma * sum_h;
    for (std::size_t j = 0; j < p; ++j) {
        const double hxj = kernels::dot(w.h, w.x_cols[j]);
        out.hessian(0, static_cast<Eigen::Index>(j + 1)) = inv_sigma * inv_sigma * hxj;
        out.hessian(static_cast<Eigen::Index>(j + 1), 0) = out.hessian(0, static_cast<Eigen::Index>(j + 1));
        for (std::size_t l = 0; l <= j; ++l) {
            const double v =
                inv_sigma * inv_sigma * kernels::weighted_dot(w.h, w.x_cols[j], w.x_cols[l]);
            out.hessian(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(l + 1)) = v;
            out.hessian(static_cast<Eigen::Index>(l + 1), static_cast<Eigen::Index>(j + 1)) = v;
        }
    }

    if (free_scale) {
        const Eigen::Index r = m - 1;
        std::size_t d_events = 0;
        for (std::size_t i = 0; i < n; ++i) d_events += w.event[i] ? 1 : 0;
        out.gradient(r) = -dot_gz - static_cast<double>(d_events);
        out.hessian(0, r) = inv_sigma * (sum_g + dot_hz);
        out.hessian(r, 0) = out.hessian(0, r);
        for (std::size_t j = 0; j < p; ++j) {
            const double v = inv_sigma * (kernels::dot(w.g, w.x_cols[j]) +
                                          kernels::weighted_dot(w.h, w.z, w.x_cols[j]));
            out.hessian(static_cast<Eigen::Index>(j + 1), r) = v;
            out.hessian(r, static_cast<Eigen::Index>(j + 1)) = v;
        }
        out.hessian(r, r) = kernels::weighted_dot(w.h, w.z, w.z) + dot_gz;
    }
    return out;
}

double parse_number(const std::string& text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw UsageError("expected a number, got '" + text + "'");
    }
    return v;
}

double survival_of_z(ErrorLaw law, double z) {
    switch (law) {
        case ErrorLaw::ExtremeValue:
            return std::exp(-std::exp(z));
        case ErrorLaw::Logistic: {
            if (z > 35.0) return std::exp(-z);
            return 1.0 / (1.0 + std::exp(z));
        }
        case ErrorLaw::Normal:
            return special::normal_sf(z);
    }
    return 0.0;
}

}  // namespace

ErrorLaw error_law(AftDistribution dist) {
    switch (dist) {
        case AftDistribution::Exponential:
        case AftDistribution::Weibull:
        case AftDistribution::Rayleigh:
            return ErrorLaw::ExtremeValue;
        case AftDistribution::LogNormal:
            return ErrorLaw::Normal;
        case AftDistribution::LogLogistic:
            return ErrorLaw::Logistic;
    }
    throw std::logic_error("unreachable");
}

std::optional<double> fixed_scale(AftDistribution dist) {
    switch (dist) {
        case AftDistribution::Exponential:
            return 1.0;
        case AftDistribution::Rayleigh:
            return 0.5;
        default:
            return std::nullopt;
    }
}

std::string distribution_name(AftDistribution dist) {
    switch (dist) {
        case AftDistribution::Exponential:
            return "exponential";
        case AftDistribution::Weibull:
            return "weibull";
        case AftDistribution::Rayleigh:
            return "rayleigh";
        case AftDistribution::LogNormal:
            return "lognormal";
        case AftDistribution::LogLogistic:
            return "loglogistic";
    }
    return "?";
}

AftDistribution parse_distribution(std::string_view text) {
    if (text == "exponential") return AftDistribution::Exponential;
    if (text == "weibull") return AftDistribution::Weibull;
    if (text == "rayleigh") return AftDistribution::Rayleigh;
    if (text == "lognormal" || text == "log-normal") return AftDistribution::LogNormal;
    if (text == "loglogistic" || text == "log-logistic") return AftDistribution::LogLogistic;
    throw UsageError("unknown distribution '" + std::string(text) +
                     "' (expected exponential, weibull, rayleigh, lognormal, loglogistic)");
}

double AftFit::z_statistic(std::size_t column) const {
    return beta(static_cast<Eigen::Index>(column)) / beta_se(static_cast<Eigen::Index>(column));
}

double AftFit::p_value(std::size_t column) const {
    return special::wald_p_value(z_statistic(column));
}

AftFit aft_fit(const Cohort& cohort, const std::vector<std::string>& variables,
               AftDistribution dist, const AftOptions& options) {
    if (cohort.empty()) throw DataError("cannot fit an AFT model on an empty cohort");
    if (cohort.event_count() == 0) throw DataError("AFT model needs at least one event");
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        if (!(cohort.records()[i].duration > 0.0)) {
            throw DataError("record " + std::to_string(i + 1) +
                            ": durations must be positive for log-time models");
        }
    }
    if (options.fix_scale && !(*options.fix_scale > 0.0)) {
        throw UsageError("fixed scale must be positive");
    }

    DesignMatrix design =
        variables.empty() ? DesignMatrix{} : build_design(cohort, variables);
    if (variables.empty()) design.n = cohort.size();
    const std::size_t p = design.width();
    const std::size_t n = cohort.size();

    std::vector<std::string> names;
    for (const auto& m : design.meta) names.push_back(m.name);

    // standardize columns for conditioning
    std::vector<double> col_mean(p), col_scale(p);
    Workspace w;
    w.x_cols.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto& raw = design.columns[j];
        double mean = 0.0;
        for (const double v : raw) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const double v : raw) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / std::max<double>(1.0, static_cast<double>(n - 1)));
        if (!(sd > 0.0)) {
            throw ModelError("covariate column '" + names[j] +
                             "' is constant; design is rank deficient");
        }
        col_mean[j] = mean;
        col_scale[j] = sd;
        w.x_cols[j].resize(n);
        for (std::size_t i = 0; i < n; ++i) w.x_cols[j][i] = (raw[i] - mean) / sd;
    }
    if (p > 1) {
        Eigen::MatrixXd xm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                xm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w.x_cols[j][i];
            }
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xm);
        qr.setThreshold(1e-10);
        if (qr.rank() < xm.cols()) {
            const auto perm = qr.colsPermutation().indices();
            throw ModelError("design matrix is rank deficient (column '" +
                             names[static_cast<std::size_t>(perm(xm.cols() - 1))] + "')");
        }
    }

    w.log_time.resize(n);
    {
        std::vector<double> durations(n);
        for (std::size_t i = 0; i < n; ++i) durations[i] = cohort.records()[i].duration;
        kernels::vlog(durations, w.log_time);
    }
    w.event.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.event[i] = cohort.records()[i].event;
    w.eta.resize(n);
    w.z.resize(n);
    w.ez.resize(n);
    w.g.resize(n);
    w.h.resize(n);

    const ErrorLaw law = error_law(dist);
    const LawFns fns = law_functions(law);
    const std::optional<double> family_fixed = fixed_scale(dist);
    const std::optional<double> fixed =
        options.fix_scale ? options.fix_scale : family_fixed;
    const bool free_scale = !fixed.has_value();

    // moment start on log durations
    double y_mean = 0.0;
    for (const double y : w.log_time) y_mean += y;
    y_mean /= static_cast<double>(n);
    double y_ss = 0.0;
    for (const double y : w.log_time) y_ss += (y - y_mean) * (y - y_mean);
    const double y_sd =
        std::sqrt(y_ss / std::max<double>(1.0, static_cast<double>(n - 1)));

    const Eigen::Index m = static_cast<Eigen::Index>(1 + p + (free_scale ? 1 : 0));
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
    theta(0) = y_mean;
    if (free_scale) {
        const double sigma0 = std::clamp(y_sd / law_sd(law), 0.05, 50.0);
        theta(m - 1) = std::log(sigma0);
    }
    const double sigma_fixed_value = fixed.value_or(1.0);

    Objective current = evaluate(w, fns, theta, free_scale, sigma_fixed_value, true);
    if (!std::isfinite(current.loglik)) {
        throw ConvergenceError("log-likelihood is not finite at the starting point");
    }
    const double loglik_start = current.loglik;

    constexpr double kMaxStepNorm = 1e3;
    int iteration = 0;
    for (; iteration < options.max_iterations; ++iteration) {
        Eigen::MatrixXd neg_hessian = -current.hessian;
        Eigen::VectorXd delta;
        double ridge = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_hessian +
                                              ridge * Eigen::MatrixXd::Identity(m, m));
            if (ldlt.info() == Eigen::Success) {
                delta = ldlt.solve(current.gradient);
                // dot == 0 only at a stationary point (delta = 0); accept it
                if (delta.allFinite() && delta.dot(current.gradient) >= 0.0) break;
            }
            ridge = ridge == 0.0 ? 1e-8 * std::max(1.0, neg_hessian.diagonal().maxCoeff())
                                 : ridge * 100.0;
            delta.resize(0);
        }
        if (delta.size() == 0) {
            throw ModelError("observed information is singular; design is rank deficient");
        }
        if (delta.lpNorm<Eigen::Infinity>() > kMaxStepNorm) {
            Eigen::Index worst = 0;
            delta.cwiseAbs().maxCoeff(&worst);
            const std::string which =
                worst == 0 ? "intercept"
                           : (free_scale && worst == m - 1
                                  ? "scale"
                                  : names[static_cast<std::size_t>(worst - 1)]);
            throw ConvergenceError("likelihood appears monotone in '" + which +
                                   "' (diverging estimate)");
        }

        double step = 1.0;
        Eigen::VectorXd candidate;
        double next_loglik = kNegInf;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            candidate = theta + step * delta;
            const Objective probe =
                evaluate(w, fns, candidate, free_scale, sigma_fixed_value, false);
            next_loglik = probe.loglik;
            if (std::isfinite(next_loglik) && next_loglik >= current.loglik - 1e-13) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            throw ConvergenceError("step halving failed at iteration " +
                                   std::to_string(iteration + 1) + " (loglik " +
                                   std::to_string(current.loglik) + ")");
        }
        const double previous = current.loglik;
        theta = candidate;
        if (p > 0 && theta.segment(1, static_cast<Eigen::Index>(p))
                             .lpNorm<Eigen::Infinity>() > 50.0) {
            Eigen::Index worst = 0;
            theta.segment(1, static_cast<Eigen::Index>(p)).cwiseAbs().maxCoeff(&worst);
            throw ConvergenceError("likelihood appears monotone in '" +
                                   names[static_cast<std::size_t>(worst)] +
                                   "' (estimate diverging)");
        }
        current = evaluate(w, fns, theta, free_scale, sigma_fixed_value, true);
        const double rel = std::fabs(current.loglik - previous) /
                           (std::fabs(previous) + 1e-10);
        if (rel < options.tolerance) {
            ++iteration;
            break;
        }
    }
    if (iteration >= options.max_iterations) {
        throw ConvergenceError("Newton-Raphson did not converge in " +
                               std::to_string(options.max_iterations) +
                               " iterations (last loglik " + std::to_string(current.loglik) +
                               ", gradient norm " + std::to_string(current.gradient.norm()) +
                               ")");
    }

    // covariance in the standardized parameterization
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-current.hessian);
    if (ldlt.info() != Eigen::Success) {
        throw ModelError("observed information is singular at the optimum");
    }
    Eigen::MatrixXd cov_std = ldlt.solve(Eigen::MatrixXd::Identity(m, m));
    if (!cov_std.allFinite()) {
        throw ModelError("observed information is singular at the optimum");
    }

    // back-transform: beta_j = b_j / s_j, mu = mu_std - sum b_j m_j / s_j
    Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(m, m);
    for (std::size_t j = 0; j < p; ++j) {
        jac(0, static_cast<Eigen::Index>(j + 1)) = -col_mean[j] / col_scale[j];
        jac(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j + 1)) =
            1.0 / col_scale[j];
    }
    const Eigen::MatrixXd cov = jac * cov_std * jac.transpose();

    AftFit fit;
    fit.distribution = dist;
    fit.variables = variables;
    fit.column_names = names;
    fit.design_meta = design.meta;
    fit.schema = cohort.schema();
    fit.intercept = theta(0);
    for (std::size_t j = 0; j < p; ++j) {
        fit.intercept -= theta(static_cast<Eigen::Index>(j + 1)) * col_mean[j] / col_scale[j];
    }
    fit.beta.resize(static_cast<Eigen::Index>(p));
    fit.beta_se.resize(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
        fit.beta(static_cast<Eigen::Index>(j)) =
            theta(static_cast<Eigen::Index>(j + 1)) / col_scale[j];
        fit.beta_se(static_cast<Eigen::Index>(j)) =
            std::sqrt(cov(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j + 1)));
    }
    fit.intercept_se = std::sqrt(cov(0, 0));
    fit.scale = free_scale ? std::exp(theta(m - 1)) : *fixed;
    fit.scale_fixed = !free_scale;
    fit.log_scale_se = free_scale ? std::sqrt(cov(m - 1, m - 1)) : 0.0;
    fit.loglik = current.loglik;
    fit.loglik_start = loglik_start;
    fit.k_free = 1 + p + (free_scale ? 1 : 0);
    fit.aic = 2.0 * static_cast<double>(fit.k_free) - 2.0 * fit.loglik;
    fit.n = n;
    fit.events = cohort.event_count();
    fit.iterations = iteration;
    fit.data_digest = cohort.data_digest();
    return fit;
}

AftObjective aft_objective(const Cohort& cohort, const std::vector<std::string>& variables,
                           AftDistribution dist, const std::vector<double>& theta,
                           const AftOptions& options) {
    if (cohort.empty()) throw DataError("empty cohort");
    for (const auto& r : cohort.records()) {
        if (!(r.duration > 0.0)) throw DataError("durations must be positive");
    }
    DesignMatrix design =
        variables.empty() ? DesignMatrix{} : build_design(cohort, variables);
    const std::size_t p = design.width();
    const std::size_t n = cohort.size();
    const std::optional<double> fixed =
        options.fix_scale ? options.fix_scale : fixed_scale(dist);
    const bool free_scale = !fixed.has_value();
    const std::size_t expected = 1 + p + (free_scale ? 1 : 0);
    if (theta.size() != expected) {
        throw UsageError("expected " + std::to_string(expected) + " parameters, got " +
                         std::to_string(theta.size()));
    }

    Workspace w;
    w.x_cols = std::move(design.columns);  // original scale, by contract
    w.log_time.resize(n);
    {
        std::vector<double> durations(n);
        for (std::size_t i = 0; i < n; ++i) durations[i] = cohort.records()[i].duration;
        kernels::vlog(durations, w.log_time);
    }
    w.event.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.event[i] = cohort.records()[i].event;
    w.eta.resize(n);
    w.z.resize(n);
    w.ez.resize(n);
    w.g.resize(n);
    w.h.resize(n);

    Eigen::VectorXd point(static_cast<Eigen::Index>(theta.size()));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        point(static_cast<Eigen::Index>(i)) = theta[i];
    }
    const Objective result = evaluate(w, law_functions(error_law(dist)), point, free_scale,
                                      fixed.value_or(1.0), true);
    AftObjective out;
    out.loglik = result.loglik;
    if (result.gradient.size() > 0) {
        out.gradient.assign(result.gradient.data(),
                            result.gradient.data() + result.gradient.size());
    }
    return out;
}

std::vector<std::pair<std::string, double>> acceleration_factors(const AftFit& fit) {
    std::vector<std::pair<std::string, double>> factors;
    factors.reserve(fit.column_names.size());
    for (std::size_t j = 0; j < fit.column_names.size(); ++j) {
        factors.emplace_back(fit.column_names[j],
                             std::exp(fit.beta(static_cast<Eigen::Index>(j))));
    }
    return factors;
}

double predict_survival_row(const AftFit& fit, const std::vector<double>& design_row,
                            double t) {
    if (t < 0.0) throw UsageError("prediction time must be non-negative");
    if (design_row.size() != fit.column_names.size()) {
        throw UsageError("design row has wrong width");
    }
    if (t == 0.0) return 1.0;
    double eta = fit.intercept;
    for (std::size_t j = 0; j < design_row.size(); ++j) {
        eta += fit.beta(static_cast<Eigen::Index>(j)) * design_row[j];
    }
    const double z = (std::log(t) - eta) / fit.scale;
    return survival_of_z(error_law(fit.distribution), z);
}

double predict_survival(const AftFit& fit,
                        const std::vector<std::pair<std::string, std::string>>& values,
                        double t) {
    auto value_of = [&values](const std::string& name) -> const std::string& {
        for (const auto& [key, value] : values) {
            if (key == name) return value;
        }
        throw UsageError("missing value for covariate '" + name + "'");
    };
    for (const auto& [key, value] : values) {
        bool known = false;
        for (const auto& m : fit.design_meta) {
            if (fit.schema.at(m.covariate).name == key) {
                known = true;
                break;
            }
        }
        if (!known) throw UsageError("covariate '" + key + "' is not in the model");
    }

    std::vector<double> row(fit.column_names.size(), 0.0);
    for (std::size_t j = 0; j < fit.design_meta.size(); ++j) {
        const auto& meta = fit.design_meta[j];
        const auto& covariate = fit.schema.at(meta.covariate);
        const std::string& text = value_of(covariate.name);
        if (meta.level >= 0) {
            const auto idx = CovariateSchema::level_index(covariate, text);
            if (!idx) {
                throw UsageError("unknown level '" + text + "' for '" + covariate.name + "'");
            }
            row[j] = static_cast<std::ptrdiff_t>(*idx) == meta.level ? 1.0 : 0.0;
        } else {
            row[j] = parse_number(text);
        }
    }
    return predict_survival_row(fit, row, t);
}

std::vector<AicRow> compare_aic(const std::vector<AftFit>& fits) {
    if (fits.empty()) throw UsageError("compare_aic needs at least one fit");
    for (const auto& fit : fits) {
        if (fit.data_digest != fits.front().data_digest ||
            fit.column_names != fits.front().column_names) {
            throw UsageError("compare_aic: fits come from different cohorts or designs");
        }
    }
    std::vector<AicRow> rows;
    rows.reserve(fits.size());
    for (const auto& fit : fits) {
        rows.push_back(AicRow{fit.distribution, fit.loglik, fit.k_free, fit.aic, 0.0});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const AicRow& a, const AicRow& b) { return a.aic < b.aic; });
    const double best = rows.front().aic;
    for (auto& row : rows) row.delta_aic = row.aic - best;
    return rows;
}

std::vector<ScreenRow> univariable_screen(const Cohort& cohort,
                                          const std::vector<std::string>& variables,
                                          AftDistribution dist) {
    if (variables.empty()) throw UsageError("univariable screen needs at least one variable");
    const AftFit null_fit = aft_fit(cohort, {}, dist);

    std::vector<ScreenRow> rows;
    rows.reserve(variables.size());
    for (const auto& variable : variables) {
        ScreenRow row;
        row.variable = variable;
        try {
            const AftFit fit = aft_fit(cohort, {variable}, dist);
            row.ok = true;
            for (std::size_t j = 0; j < fit.column_names.size(); ++j) {
                ScreenCoefficient c;
                c.name = fit.column_names[j];
                c.beta = fit.beta(static_cast<Eigen::Index>(j));
                c.se = fit.beta_se(static_cast<Eigen::Index>(j));
                c.p = fit.p_value(j);
                c.accel_factor = std::exp(c.beta);
                row.coefficients.push_back(std::move(c));
            }
            row.lr_df = fit.column_names.size();
            row.lr_chi_square = std::max(0.0, 2.0 * (fit.loglik - null_fit.loglik));
            row.lr_p = special::chi_square_sf(row.lr_chi_square,
                                              static_cast<double>(row.lr_df));
        } catch (const UsageError&) {
            throw;  // bad variable names are caller mistakes, not data findings
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace netsurv
