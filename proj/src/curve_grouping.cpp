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

#include "netsurv/curve_grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "netsurv/errors.hpp"
#include "netsurv/kaplan_meier.hpp"

namespace netsurv {

namespace {

struct SegmentTest {
    double chi_square = 0.0;
    double p_value = 1.0;
};

}  // namespace

std::size_t GroupAssignment::group_of(std::string_view level) const {
    for (const auto& group : groups) {
        for (const auto& l : group.levels) {
            if (l == level) return group.index;
        }
    }
    throw UsageError("level '" + std::string(level) + "' is not in the assignment");
}

GroupAssignment group_curves(const Cohort& cohort, std::string_view variable,
                             const WeightSpec& weight, double alpha,
                             std::size_t max_groups) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie inside (0, 1)");
    const std::size_t var_index = cohort.schema().require(variable);
    if (cohort.schema().at(var_index).kind != CovariateKind::Categorical) {
        throw UsageError("covariate '" + std::string(variable) + "' is not categorical");
    }

    // non-empty levels with their curves
    auto parts = split_by_level(cohort, variable);
    struct LevelData {
        std::string level;
        Cohort sub;
        SurvivalCurve curve;
        double rmst = 0.0;
    };
    std::vector<LevelData> levels;
    for (auto& [level, sub] : parts) {
        if (sub.empty()) continue;
        SurvivalCurve curve = km_fit(sub);
        levels.push_back(LevelData{level, std::move(sub), std::move(curve), 0.0});
    }
    const std::size_t k = levels.size();
    if (k < 2) throw UsageError("curve grouping needs at least 2 non-empty levels");
    if (max_groups == 0) max_groups = k;
    if (max_groups > k) max_groups = k;

    // horizon shared by every level: the smallest of the per-level end
    // times (last event time, or last observed time for event-free levels)
    double tau = std::numeric_limits<double>::infinity();
    for (const auto& level : levels) {
        const auto last_event = level.curve.last_event_time();
        tau = std::min(tau, last_event ? *last_event : level.curve.max_observed_time);
    }
    for (auto& level : levels) level.rmst = level.curve.restricted_mean(tau);

    std::sort(levels.begin(), levels.end(), [](const LevelData& a, const LevelData& b) {
        if (a.rmst != b.rmst) return a.rmst < b.rmst;
        return a.level < b.level;
    });

    // within-segment k-sample tests for every contiguous range [i, j]
    std::vector<std::vector<SegmentTest>> segment(k, std::vector<SegmentTest>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            std::vector<SurvivalRecord> records;
            std::size_t events = 0;
            for (std::size_t l = i; l <= j; ++l) {
                records.insert(records.end(), levels[l].sub.records().begin(),
                               levels[l].sub.records().end());
                events += levels[l].sub.event_count();
            }
            if (events == 0) {
                segment[i][j] = {0.0, 1.0};  // nothing ever fails: trivially homogeneous
                continue;
            }
            Cohort pooled(cohort.schema(), std::move(records));
            const RankTestResult test = weighted_logrank(pooled, variable, weight);
            segment[i][j] = {test.chi_square, test.p_value};
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    auto partition_for = [&](std::size_t n_groups) {
        // dp over split points minimizing the summed within statistics
        std::vector<std::vector<double>> cost(n_groups + 1,
                                              std::vector<double>(k + 1, inf));
        std::vector<std::vector<std::size_t>> arg(n_groups + 1,
                                                  std::vector<std::size_t>(k + 1, 0));
        cost[0][0] = 0.0;
        for (std::size_t g = 1; g <= n_groups; ++g) {
            for (std::size_t j = g; j + (n_groups - g) <= k; ++j) {
                for (std::size_t m = g - 1; m < j; ++m) {
                    if (cost[g - 1][m] == inf) continue;
                    const double c =
                        cost[g - 1][m] + segment[m][j - 1].chi_square;
                    if (c < cost[g][j]) {
                        cost[g][j] = c;
                        arg[g][j] = m;
                    }
                }
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> ranges(n_groups);
        std::size_t j = k;
        for (std::size_t g = n_groups; g >= 1; --g) {
            const std::size_t m = arg[g][j];
            ranges[g - 1] = {m, j - 1};
            j = m;
        }
        return ranges;
    };

    GroupAssignment assignment;
    assignment.weight = weight;
    assignment.alpha = alpha;

    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    bool found = false;
    std::vector<double> chosen_raw;
    std::vector<double> chosen_adj;
    for (std::size_t g = 1; g <= max_groups; ++g) {
        const auto ranges = partition_for(g);
        std::vector<double> raw(g);
        for (std::size_t r = 0; r < g; ++r) {
            const auto [a, b] = ranges[r];
            raw[r] = a == b ? 1.0 : segment[a][b].p_value;
        }
        const std::vector<double> adjusted = bh_adjust(raw);
        const bool all_clear =
            std::all_of(adjusted.begin(), adjusted.end(),
                        [alpha](double p) { return p >= alpha; });
        chosen = ranges;
        chosen_raw = raw;
        chosen_adj = adjusted;
        if (all_clear) {
            found = true;
            break;
        }
    }
    assignment.homogeneous = found;
    assignment.n_groups = chosen.size();
    for (std::size_t r = 0; r < chosen.size(); ++r) {
        const auto [a, b] = chosen[r];
        GroupAssignment::Group group;
        group.index = r + 1;
        double rmst_sum = 0.0;
        for (std::size_t l = a; l <= b; ++l) {
            group.levels.push_back(levels[l].level);
            rmst_sum += levels[l].rmst;
        }
        group.mean_rmst = rmst_sum / static_cast<double>(b - a + 1);
        group.within_p = chosen_raw[r];
        group.adjusted_p = chosen_adj[r];
        assignment.groups.push_back(std::move(group));
    }
    return assignment;
}

void write_group_csv(std::ostream& out, const GroupAssignment& assignment) {
    out << "level,group\n";
    for (const auto& group : assignment.groups) {
        for (const auto& level : group.levels) {
            out << level << ',' << group.index << '\n';
        }
    }
}

}  // namespace netsurv
