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

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "netsurv/cohort.hpp"
#include "netsurv/rank_tests.hpp"

namespace netsurv {

/// Partition of the level-wise survival curves into homogeneous groups.
/// Group indices run 1..G ordered by ascending mean restricted mean
/// survival, so group 1 always dies fastest.
struct GroupAssignment {
    struct Group {
        std::size_t index = 1;
        std::vector<std::string> levels;
        double within_p = 1.0;    // raw within-group k-sample p (1 for singletons)
        double adjusted_p = 1.0;  // BH-adjusted across the G tests
        double mean_rmst = 0.0;
    };

    std::vector<Group> groups;
    std::size_t n_groups = 1;
    bool homogeneous = true;  // false when even G = max_groups stays significant
    WeightSpec weight;
    double alpha = 0.05;

    std::size_t group_of(std::string_view level) const;  // UsageError if unknown
};

/// Grouping procedure: order the levels by restricted mean survival
/// (integrated to the largest event time shared by all levels), search
/// contiguous partitions by dynamic programming minimizing the sum of
/// within-group k-sample statistics, and accept the smallest G whose
/// within-group tests all clear alpha after BH adjustment.
///
/// max_groups = 0 means "as many as there are levels".
GroupAssignment group_curves(const Cohort& cohort, std::string_view variable,
                             const WeightSpec& weight = WeightSpec::peto_peto(),
                             double alpha = 0.05, std::size_t max_groups = 0);

/// Per-level CSV (level, group) for plot colouring.
void write_group_csv(std::ostream& out, const GroupAssignment& assignment);

}  // namespace netsurv
