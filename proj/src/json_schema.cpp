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

#include "netsurv/json_schema.hpp"

#include <set>

namespace netsurv::jsonschema {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeywords = {
    "$schema", "title",    "description", "type",     "properties",
    "required", "items",   "enum",        "minimum",  "maximum",
    "minItems", "additionalProperties"};

bool type_matches(const std::string& type, const json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "number") return value.is_number();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

void check(const json& schema, const json& value, const std::string& path,
           ValidationResult& result) {
    auto fail = [&result, &path](const std::string& message) {
        result.ok = false;
        result.errors.push_back(path + ": " + message);
    };

    if (!schema.is_object()) {
        fail("schema node must be an object");
        return;
    }
    for (const auto& [key, unused] : schema.items()) {
        if (kKnownKeywords.count(key) == 0) {
            fail("schema uses unsupported keyword '" + key + "'");
            return;
        }
    }

    if (schema.contains("type")) {
        const json& type = schema["type"];
        bool matched = false;
        if (type.is_string()) {
            matched = type_matches(type.get<std::string>(), value);
        } else if (type.is_array()) {
            for (const auto& t : type) {
                if (type_matches(t.get<std::string>(), value)) {
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) {
            fail("expected type " + type.dump() + ", got " + std::string(value.type_name()));
            return;
        }
    }

    if (schema.contains("enum")) {
        bool matched = false;
        for (const auto& candidate : schema["enum"]) {
            if (candidate == value) {
                matched = true;
                break;
            }
        }
        if (!matched) fail("value " + value.dump() + " not in enum");
    }

    if (value.is_number()) {
        const double v = value.get<double>();
        if (schema.contains("minimum") && v < schema["minimum"].get<double>()) {
            fail("value below minimum");
        }
        if (schema.contains("maximum") && v > schema["maximum"].get<double>()) {
            fail("value above maximum");
        }
    }

    if (value.is_object()) {
        if (schema.contains("required")) {
            for (const auto& name : schema["required"]) {
                if (!value.contains(name.get<std::string>())) {
                    fail("missing required property '" + name.get<std::string>() + "'");
                }
            }
        }
        const json properties =
            schema.contains("properties") ? schema["properties"] : json::object();
        const bool allow_extra = !schema.contains("additionalProperties") ||
                                 schema["additionalProperties"].get<bool>();
        for (const auto& [key, member] : value.items()) {
            if (properties.contains(key)) {
                check(properties[key], member, path + "/" + key, result);
            } else if (!allow_extra) {
                fail("unexpected property '" + key + "'");
            }
        }
    }

    if (value.is_array()) {
        if (schema.contains("minItems") &&
            value.size() < schema["minItems"].get<std::size_t>()) {
            fail("array shorter than minItems");
        }
        if (schema.contains("items")) {
            std::size_t index = 0;
            for (const auto& item : value) {
                check(schema["items"], item, path + "/" + std::to_string(index), result);
                ++index;
            }
        }
    }
}

}  // namespace

ValidationResult validate(const json& schema, const json& instance) {
    ValidationResult result;
    check(schema, instance, "$", result);
    return result;
}

}  // namespace netsurv::jsonschema
