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

#include "netsurv/design.hpp"

#include <unordered_set>

#include "netsurv/errors.hpp"

namespace netsurv {

DesignMatrix build_design(const Cohort& cohort, const std::vector<std::string>& variables) {
    if (variables.empty()) throw UsageError("no covariates given");
    std::unordered_set<std::string> seen;
    DesignMatrix design;
    design.n = cohort.size();

    for (const auto& name : variables) {
        if (!seen.insert(name).second) {
            throw UsageError("covariate '" + name + "' listed twice");
        }
        const std::size_t idx = cohort.schema().require(name);
        const auto& covariate = cohort.schema().at(idx);
        if (covariate.kind == CovariateKind::Categorical) {
            // indicators only for levels actually present
            std::vector<bool> present(covariate.levels.size(), false);
            for (const auto& r : cohort.records()) {
                present[static_cast<std::size_t>(r.covariates[idx])] = true;
            }
            std::size_t n_present = 0;
            for (const bool p : present) n_present += p ? 1 : 0;
            if (n_present < 2) {
                throw ModelError("categorical covariate '" + name +
                                 "' has fewer than two levels present");
            }
            bool reference_assigned = false;
            for (std::size_t l = 0; l < covariate.levels.size(); ++l) {
                if (!present[l]) continue;
                if (!reference_assigned) {  // first present level is the reference
                    reference_assigned = true;
                    continue;
                }
                DesignColumn column;
                column.name = name + "=" + covariate.levels[l];
                column.covariate = idx;
                column.level = static_cast<std::ptrdiff_t>(l);
                std::vector<double> values(cohort.size());
                for (std::size_t i = 0; i < cohort.size(); ++i) {
                    values[i] = cohort.records()[i].covariates[idx] ==
                                        static_cast<double>(l)
                                    ? 1.0
                                    : 0.0;
                }
                design.meta.push_back(std::move(column));
                design.columns.push_back(std::move(values));
            }
        } else {
            DesignColumn column;
            column.name = name;
            column.covariate = idx;
            std::vector<double> values(cohort.size());
            for (std::size_t i = 0; i < cohort.size(); ++i) {
                values[i] = cohort.records()[i].covariates[idx];
            }
            design.meta.push_back(std::move(column));
            design.columns.push_back(std::move(values));
        }
    }
    return design;
}

}  // namespace netsurv
