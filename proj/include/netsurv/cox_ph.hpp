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
#include <string>
#include <string_view>
#include <vector>

#include "netsurv/cohort.hpp"

namespace netsurv {

enum class TiesMethod { Efron, Breslow };

TiesMethod parse_ties(std::string_view text);
std::string ties_name(TiesMethod ties);

/// Maximum partial-likelihood fit.  Covariates are centred and scaled
/// internally for conditioning; everything reported here is back on the
/// original scale.
struct CoxFit {
    std::vector<std::string> variables;     // as requested
    std::vector<std::string> column_names;  // after dummy coding
    Eigen::VectorXd beta;
    Eigen::MatrixXd information;  // observed information at beta
    Eigen::MatrixXd vcov;         // its inverse
    double loglik0 = 0.0;         // log PL at beta = 0
    double loglik = 0.0;          // log PL at beta
    int iterations = 0;
    TiesMethod ties = TiesMethod::Efron;
    std::size_t n = 0;
    std::size_t events = 0;
    std::uint64_t data_digest = 0;

    double std_error(std::size_t column) const;
    double z_statistic(std::size_t column) const;
    double p_value(std::size_t column) const;
};

CoxFit cox_fit(const Cohort& cohort, const std::vector<std::string>& variables,
               TiesMethod ties = TiesMethod::Efron);

enum class TimeTransform { Km, Identity, Rank, Log };

TimeTransform parse_transform(std::string_view text);
std::string transform_name(TimeTransform transform);

/// Grambsch-Therneau proportional-hazards diagnostic: scaled Schoenfeld
/// residuals correlated against a transform of the event times.
struct PhTestResult {
    struct Column {
        std::string name;
        double chi_square = 0.0;
        double p_value = 1.0;  // df = 1
    };
    std::vector<Column> columns;
    double global_chi_square = 0.0;
    std::size_t global_df = 0;
    double global_p = 1.0;
    TimeTransform transform = TimeTransform::Km;
};

PhTestResult ph_test(const CoxFit& fit, const Cohort& cohort,
                     TimeTransform transform = TimeTransform::Km);

/// Per-event Schoenfeld residuals (one row per death, time-ascending)
/// under the fit's tie handling, plus the matching event times.
/// Exposed for diagnostics and tests; rows sum to ~0 at the MLE.
struct SchoenfeldResiduals {
    std::vector<double> times;  // one per death
    Eigen::MatrixXd residuals;  // deaths x columns
};

SchoenfeldResiduals schoenfeld_residuals(const CoxFit& fit, const Cohort& cohort);

}  // namespace netsurv
