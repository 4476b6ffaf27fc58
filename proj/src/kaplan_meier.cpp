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

#include "netsurv/kaplan_meier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "netsurv/errors.hpp"

namespace netsurv {

namespace {

constexpr double kZ95 = 1.959963984540054;

std::string format_full(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void fill_confidence(SurvivalCurve::Step& step, ConfidenceStyle style) {
    step.std_err = std::sqrt(step.variance);
    const double s = step.survival;
    if (s <= 0.0) {
        step.ci_low = 0.0;
        step.ci_high = 0.0;
        return;
    }
    if (s >= 1.0) {
        step.ci_low = 1.0;
        step.ci_high = 1.0;
        return;
    }
    if (style == ConfidenceStyle::Plain) {
        step.ci_low = std::max(0.0, s - kZ95 * step.std_err);
        step.ci_high = std::min(1.0, s + kZ95 * step.std_err);
        return;
    }
    // log-log: var of log(-log S) by the delta method
    const double log_s = std::log(s);
    const double se_cll = step.std_err / std::fabs(s * log_s);
    const double cll = std::log(-log_s);
    step.ci_low = std::exp(-std::exp(cll + kZ95 * se_cll));
    step.ci_high = std::exp(-std::exp(cll - kZ95 * se_cll));
}

}  // namespace

SurvivalCurve km_fit(const Cohort& cohort, ConfidenceStyle style) {
    if (cohort.empty()) throw DataError("cannot fit a survival curve on an empty cohort");

    struct Obs {
        double time;
        bool event;
    };
    std::vector<Obs> obs;
    obs.reserve(cohort.size());
    for (const auto& r : cohort.records()) obs.push_back({r.duration, r.event});
    std::sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.event > b.event;  // events ahead of censorings at ties
    });

    SurvivalCurve curve;
    curve.n = cohort.size();
    curve.events = cohort.event_count();
    curve.max_observed_time = obs.back().time;

    const std::size_t n_total = obs.size();
    std::size_t i = 0;
    std::size_t at_risk = n_total;
    std::size_t survivors = n_total;  // exact count while no censoring seen yet
    bool censoring_seen = false;
    double survival = 1.0;
    double greenwood_sum = 0.0;
    bool curve_hit_zero = false;

    while (i < n_total) {
        const double t = obs[i].time;
        std::size_t d = 0;
        std::size_t c = 0;
        while (i < n_total && obs[i].time == t) {
            if (obs[i].event) {
                ++d;
            } else {
                ++c;
            }
            ++i;
        }
        if (d == 0) {
            censoring_seen = true;
            at_risk -= c;
            if (!curve.steps.empty()) curve.steps.back().n_censor += c;
            continue;
        }

        SurvivalCurve::Step step;
        step.time = t;
        step.n_risk = at_risk;
        step.n_event = d;
        step.n_censor = c;

        survivors -= d;
        if (!censoring_seen) {
            // With no censoring so far the estimate is a single ratio,
            // which keeps it bit-exact against the empirical fraction.
            survival = static_cast<double>(survivors) / static_cast<double>(n_total);
        } else {
            survival *= (static_cast<double>(at_risk - d) / static_cast<double>(at_risk));
        }
        if (d == at_risk) {
            curve_hit_zero = true;
            survival = 0.0;
        } else {
            greenwood_sum += static_cast<double>(d) /
                             (static_cast<double>(at_risk) * static_cast<double>(at_risk - d));
        }
        step.survival = survival;
        step.variance = curve_hit_zero ? 0.0 : survival * survival * greenwood_sum;
        fill_confidence(step, style);
        curve.steps.push_back(step);

        at_risk -= d + c;
        if (c > 0) censoring_seen = true;
        survivors = at_risk;
    }
    return curve;
}

double SurvivalCurve::survival_at(double t) const {
    if (t < 0.0) throw UsageError("survival_at: time must be non-negative");
    // last step with time <= t
    double value = 1.0;
    for (const auto& step : steps) {
        if (step.time > t) break;
        value = step.survival;
    }
    return value;
}

std::optional<double> SurvivalCurve::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw UsageError("quantile: q must be inside (0, 1)");
    const double threshold = 1.0 - q;
    for (const auto& step : steps) {
        if (step.survival <= threshold + 1e-15) return step.time;
    }
    return std::nullopt;
}

double SurvivalCurve::restricted_mean(double tau) const {
    if (tau < 0.0) throw UsageError("restricted_mean: tau must be non-negative");
    double area = 0.0;
    double prev_time = 0.0;
    double prev_survival = 1.0;
    for (const auto& step : steps) {
        if (step.time >= tau) break;
        area += prev_survival * (step.time - prev_time);
        prev_time = step.time;
        prev_survival = step.survival;
    }
    area += prev_survival * (tau - prev_time);
    return area;
}

std::optional<double> SurvivalCurve::last_event_time() const {
    if (steps.empty()) return std::nullopt;
    return steps.back().time;
}

std::vector<std::pair<std::string, SurvivalCurve>> km_stratified(
    const Cohort& cohort, std::string_view variable, ConfidenceStyle style) {
    auto parts = split_by_level(cohort, variable);
    std::vector<std::pair<std::string, SurvivalCurve>> curves;
    curves.reserve(parts.size());
    for (auto& [level, sub] : parts) {
        if (sub.empty()) {
            throw DataError("level '" + level + "' of '" + std::string(variable) +
                            "' has no records");
        }
        curves.emplace_back(level, km_fit(sub, style));
    }
    return curves;
}

namespace {

void write_curve_rows(std::ostream& out, const SurvivalCurve& curve,
                      const std::string* level) {
    for (const auto& step : curve.steps) {
        if (level != nullptr) out << *level << ',';
        out << format_full(step.time) << ',' << step.n_risk << ',' << step.n_event << ','
            << step.n_censor << ',' << format_full(step.survival) << ','
            << format_full(step.std_err) << ',' << format_full(step.ci_low) << ','
            << format_full(step.ci_high) << '\n';
    }
}

}  // namespace

void write_curve_csv(std::ostream& out, const SurvivalCurve& curve) {
    out << "time,n_risk,n_event,n_censor,survival,std_err,ci_low,ci_high\n";
    write_curve_rows(out, curve, nullptr);
}

void write_stratified_csv(
    std::ostream& out,
    const std::vector<std::pair<std::string, SurvivalCurve>>& curves) {
    out << "level,time,n_risk,n_event,n_censor,survival,std_err,ci_low,ci_high\n";
    for (const auto& [level, curve] : curves) write_curve_rows(out, curve, &level);
}

}  // namespace netsurv
