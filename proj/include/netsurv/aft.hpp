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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netsurv/cohort.hpp"
#include "netsurv/design.hpp"

namespace netsurv {

/// Parametric families for log T = mu + beta'x + sigma W.  Positive
/// coefficients lengthen survival; exp(beta) is the acceleration factor.
enum class AftDistribution { Exponential, Weibull, Rayleigh, LogNormal, LogLogistic };

/// Error law of W implied by the distribution of T.
enum class ErrorLaw { ExtremeValue, Logistic, Normal };

ErrorLaw error_law(AftDistribution dist);

/// Scale fixed by the family (Exponential 1, Rayleigh 0.5), if any.
std::optional<double> fixed_scale(AftDistribution dist);

std::string distribution_name(AftDistribution dist);
AftDistribution parse_distribution(std::string_view text);

struct AftOptions {
    /// Constrain sigma to this value regardless of family (nesting checks).
    std::optional<double> fix_scale;
    int max_iterations = 100;
    double tolerance = 1e-9;
};

/// Censored maximum-likelihood fit.  Coefficients and standard errors
/// are reported on the original covariate scale.
struct AftFit {
    AftDistribution distribution = AftDistribution::Weibull;
    std::vector<std::string> variables;
    std::vector<std::string> column_names;
    std::vector<DesignColumn> design_meta;
    CovariateSchema schema;

    double intercept = 0.0;
    double intercept_se = 0.0;
    Eigen::VectorXd beta;
    Eigen::VectorXd beta_se;
    double scale = 1.0;
    bool scale_fixed = false;
    double log_scale_se = 0.0;  // 0 when the scale is fixed

    double loglik = 0.0;
    double loglik_start = 0.0;
    double aic = 0.0;
    std::size_t k_free = 0;
    std::size_t n = 0;
    std::size_t events = 0;
    int iterations = 0;
    std::uint64_t data_digest = 0;

    double z_statistic(std::size_t column) const;
    double p_value(std::size_t column) const;
};

/// Fit with the given covariates (empty list = intercept-only model).
AftFit aft_fit(const Cohort& cohort, const std::vector<std::string>& variables,
               AftDistribution dist, const AftOptions& options = {});

/// Log-likelihood and analytic score at an arbitrary parameter point,
/// ordered (mu, beta_1..beta_p[, log sigma] ) on the original covariate
/// scale; the log-sigma coordinate is present only when the scale is
/// free.  Diagnostics surface, used by the derivative checks.
struct AftObjective {
    double loglik = 0.0;
    std::vector<double> gradient;
};

AftObjective aft_objective(const Cohort& cohort, const std::vector<std::string>& variables,
                           AftDistribution dist, const std::vector<double>& theta,
                           const AftOptions& options = {});

/// exp(beta) per design column.
std::vector<std::pair<std::string, double>> acceleration_factors(const AftFit& fit);

/// Survival probability at time t for named covariate values
/// ("form" -> "2", "profit" -> "9.4").  Every model variable must be
/// given; categorical values must be declared levels.
double predict_survival(const AftFit& fit,
                        const std::vector<std::pair<std::string, std::string>>& values,
                        double t);

/// Survival at t for an explicit design row (one value per column).
double predict_survival_row(const AftFit& fit, const std::vector<double>& design_row,
                            double t);

struct AicRow {
    AftDistribution distribution = AftDistribution::Weibull;
    double loglik = 0.0;
    std::size_t k = 0;
    double aic = 0.0;
    double delta_aic = 0.0;
};

/// Rows sorted by ascending AIC.  All fits must come from the same
/// cohort and design.
std::vector<AicRow> compare_aic(const std::vector<AftFit>& fits);

struct ScreenCoefficient {
    std::string name;
    double beta = 0.0;
    double se = 0.0;
    double p = 1.0;
    double accel_factor = 1.0;
};

struct ScreenRow {
    std::string variable;
    bool ok = false;
    std::string error;
    std::vector<ScreenCoefficient> coefficients;
    // joint likelihood-ratio test of the variable against the null model
    double lr_chi_square = 0.0;
    std::size_t lr_df = 0;
    double lr_p = 1.0;
};

/// One single-covariate fit per variable ("simple regression" columns).
/// Per-variable failures are reported in the row; screening continues.
std::vector<ScreenRow> univariable_screen(const Cohort& cohort,
                                          const std::vector<std::string>& variables,
                                          AftDistribution dist);

}  // namespace netsurv
