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

#include <json.hpp>

#include "netsurv/aft.hpp"
#include "netsurv/cohort.hpp"
#include "netsurv/cox_ph.hpp"
#include "netsurv/curve_grouping.hpp"
#include "netsurv/kaplan_meier.hpp"
#include "netsurv/rank_tests.hpp"

namespace netsurv {

nlohmann::json to_json(const SummaryReport& report);
nlohmann::json to_json(const SurvivalCurve& curve);
nlohmann::json to_json(const RankTestResult& result);
nlohmann::json to_json(const PairwiseMatrix& matrix);
nlohmann::json to_json(const CoxFit& fit);
nlohmann::json to_json(const PhTestResult& result);
nlohmann::json to_json(const AftFit& fit);
nlohmann::json to_json(const std::vector<AicRow>& rows);
nlohmann::json to_json(const std::vector<ScreenRow>& rows, AftDistribution dist);
nlohmann::json to_json(const GroupAssignment& assignment);

}  // namespace netsurv
