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

#include <string>
#include <string_view>
#include <vector>

#include "netsurv/cohort.hpp"

namespace netsurv {

/// Dummy-coded regression design.  Categorical covariates expand into
/// one indicator column per non-reference level (reference = first
/// declared level, matching the "-" rows of the paper's tables);
/// continuous covariates map to a single column.  Column-major storage
/// keeps the per-column reductions contiguous.
struct DesignColumn {
    std::string name;              // "form=2" or "profit"
    std::size_t covariate = 0;     // schema index
    std::ptrdiff_t level = -1;     // level index for indicators, -1 otherwise
};

struct DesignMatrix {
    std::vector<DesignColumn> meta;
    std::vector<std::vector<double>> columns;  // meta.size() columns of length n
    std::size_t n = 0;

    std::size_t width() const { return columns.size(); }
};

/// Build the design for the given covariate names (schema order is not
/// required).  Throws UsageError for unknown names, ModelError for a
/// categorical variable with fewer than two levels present.
DesignMatrix build_design(const Cohort& cohort, const std::vector<std::string>& variables);

}  // namespace netsurv
