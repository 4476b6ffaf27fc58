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

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "netsurv/cohort.hpp"

namespace netsurv {

enum class ConfidenceStyle {
    LogLog,  ///< complementary log-log intervals, always inside [0, 1]
    Plain,   ///< linear Greenwood intervals, clipped to [0, 1]
};

/// Product-limit estimate.  One step per distinct event time; censorings
/// between event times are folded into the preceding step's n_censor.
/// Ties between events and censorings at the same time put the events
/// first (the censored stay in the risk set for that time).
struct SurvivalCurve {
    struct Step {
        double time = 0.0;
        std::size_t n_risk = 0;
        std::size_t n_event = 0;
        std::size_t n_censor = 0;  // censored in [time, next event time)
        double survival = 0.0;
        double variance = 0.0;  // Greenwood
        double std_err = 0.0;
        double ci_low = 0.0;
        double ci_high = 0.0;
    };

    std::vector<Step> steps;
    std::size_t n = 0;
    std::size_t events = 0;
    double max_observed_time = 0.0;

    /// Right-continuous step evaluation; 1 before the first event time.
    double survival_at(double t) const;

    /// Smallest event time where survival drops to 1 - q or below;
    /// absent when the curve never descends that far.
    std::optional<double> quantile(double q) const;

    /// Median survival time (quantile at 0.5).
    std::optional<double> median() const { return quantile(0.5); }

    /// Area under the curve on [0, tau].
    double restricted_mean(double tau) const;

    /// Largest event time, if any event occurred.
    std::optional<double> last_event_time() const;
};

SurvivalCurve km_fit(const Cohort& cohort,
                     ConfidenceStyle style = ConfidenceStyle::LogLog);

/// One curve per level of a categorical covariate, schema order.
/// An empty level raises DataError naming it.
std::vector<std::pair<std::string, SurvivalCurve>> km_stratified(
    const Cohort& cohort, std::string_view variable,
    ConfidenceStyle style = ConfidenceStyle::LogLog);

/// Step-plot CSV: time, n_risk, n_event, n_censor, survival, std_err,
/// ci_low, ci_high.
void write_curve_csv(std::ostream& out, const SurvivalCurve& curve);

/// Same columns with a leading level column, one block per level.
void write_stratified_csv(
    std::ostream& out,
    const std::vector<std::pair<std::string, SurvivalCurve>>& curves);

}  // namespace netsurv
