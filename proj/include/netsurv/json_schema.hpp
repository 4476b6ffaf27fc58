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
#include <string>
#include <vector>

namespace netsurv::jsonschema {

struct ValidationResult {
    bool ok = true;
    std::vector<std::string> errors;
};

/// Structural validator for the subset of JSON Schema the shipped
/// schemas use: type (single or list), properties, required,
/// additionalProperties (bool), items (single schema), enum,
/// minimum/maximum, minItems.  Unknown keywords are rejected so a
/// schema typo cannot silently validate everything.
ValidationResult validate(const nlohmann::json& schema, const nlohmann::json& instance);

}  // namespace netsurv::jsonschema
