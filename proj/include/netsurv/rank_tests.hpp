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

namespace netsurv {

/// Weight applied to each pooled event time in the k-sample test.
struct WeightSpec {
    enum class Kind { LogRank, Gehan, PetoPeto, FlemingHarrington };

    Kind kind = Kind::LogRank;
    double rho = 0.0;    // Fleming-Harrington only
    double gamma = 0.0;  // Fleming-Harrington only

    static WeightSpec log_rank() { return {Kind::LogRank, 0.0, 0.0}; }
    static WeightSpec gehan() { return {Kind::Gehan, 0.0, 0.0}; }
    static WeightSpec peto_peto() { return {Kind::PetoPeto, 0.0, 0.0}; }
    static WeightSpec fleming_harrington(double rho, double gamma);

    /// Parse "logrank", "gehan", "peto", "fh" (with separate rho/gamma).
    static WeightSpec parse(std::string_view text, double rho = 0.0, double gamma = 0.0);

    std::string label() const;
};

struct GroupEventStats {
    std::string level;
    std::size_t n = 0;
    std::size_t observed = 0;  // events in the group
    double expected = 0.0;     // hypergeometric expectation under H0
};

struct RankTestResult {
    double chi_square = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
    WeightSpec weight;
    std::vector<GroupEventStats> groups;
};

/// k-sample weighted log-rank test across the levels of a categorical
/// covariate.  Requires at least two non-empty levels and one event.
RankTestResult weighted_logrank(const Cohort& cohort, std::string_view variable,
                                const WeightSpec& weight = WeightSpec::log_rank());

/// Benjamini-Hochberg step-up adjustment; output in input order.
std::vector<double> bh_adjust(const std::vector<double>& p_values);

/// All unordered level pairs with BH correction applied across the
/// whole set of comparisons.
struct PairwiseMatrix {
    std::vector<std::string> levels;
    std::vector<double> raw;       // flattened upper triangle, i < j
    std::vector<double> adjusted;  // same layout
    WeightSpec weight;

    std::size_t pair_index(std::size_t i, std::size_t j) const;
    double raw_at(std::size_t i, std::size_t j) const;
    double adjusted_at(std::size_t i, std::size_t j) const;
    std::size_t comparisons() const { return raw.size(); }
};

PairwiseMatrix pairwise_tests(const Cohort& cohort, std::string_view variable,
                              const WeightSpec& weight = WeightSpec::peto_peto());

/// Level-labelled matrix of adjusted p-values (lower triangle filled).
void write_pairwise_csv(std::ostream& out, const PairwiseMatrix& matrix,
                        bool adjusted = true);

}  // namespace netsurv
