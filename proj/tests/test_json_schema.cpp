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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "netsurv/json_schema.hpp"

using namespace netsurv::jsonschema;
using nlohmann::json;

TEST_CASE("type checks") {
    const json schema = R"({"type": "object", "properties": {"x": {"type": "number"}}})"_json;
    CHECK(validate(schema, R"({"x": 1.5})"_json).ok);
    CHECK_FALSE(validate(schema, R"({"x": "s"})"_json).ok);
    CHECK_FALSE(validate(schema, R"([1])"_json).ok);
}

TEST_CASE("type lists accept any member") {
    const json schema = R"({"type": ["number", "null"]})"_json;
    CHECK(validate(schema, json(1.0)).ok);
    CHECK(validate(schema, json(nullptr)).ok);
    CHECK_FALSE(validate(schema, json("x")).ok);
}

TEST_CASE("integers are numbers but not vice versa") {
    CHECK(validate(R"({"type": "number"})"_json, json(3)).ok);
    CHECK_FALSE(validate(R"({"type": "integer"})"_json, json(3.5)).ok);
    CHECK(validate(R"({"type": "integer"})"_json, json(3)).ok);
}

TEST_CASE("required and additionalProperties") {
    const json schema = R"({
        "type": "object",
        "required": ["a"],
        "additionalProperties": false,
        "properties": {"a": {"type": "integer"}, "b": {"type": "string"}}
    })"_json;
    CHECK(validate(schema, R"({"a": 1})"_json).ok);
    CHECK(validate(schema, R"({"a": 1, "b": "x"})"_json).ok);
    CHECK_FALSE(validate(schema, R"({"b": "x"})"_json).ok);
    CHECK_FALSE(validate(schema, R"({"a": 1, "zzz": 2})"_json).ok);
}

TEST_CASE("bounds, enum, minItems, items") {
    const json schema = R"({
        "type": "array",
        "minItems": 2,
        "items": {"type": "number", "minimum": 0, "maximum": 1}
    })"_json;
    CHECK(validate(schema, R"([0.2, 0.8])"_json).ok);
    CHECK_FALSE(validate(schema, R"([0.2])"_json).ok);
    CHECK_FALSE(validate(schema, R"([0.2, 1.5])"_json).ok);

    const json enum_schema = R"({"enum": ["a", "b"]})"_json;
    CHECK(validate(enum_schema, json("a")).ok);
    CHECK_FALSE(validate(enum_schema, json("c")).ok);
}

TEST_CASE("unsupported keywords are rejected, not ignored") {
    const json schema = R"({"type": "object", "oneOf": [{"type": "object"}]})"_json;
    const auto result = validate(schema, R"({})"_json);
    CHECK_FALSE(result.ok);
    REQUIRE_FALSE(result.errors.empty());
    CHECK(result.errors[0].find("oneOf") != std::string::npos);
}

TEST_CASE("error paths name the offending node") {
    const json schema = R"({
        "type": "object",
        "properties": {"rows": {"type": "array", "items": {"type": "integer"}}}
    })"_json;
    const auto result = validate(schema, R"({"rows": [1, "two"]})"_json);
    CHECK_FALSE(result.ok);
    REQUIRE_FALSE(result.errors.empty());
    CHECK(result.errors[0].find("$/rows/1") != std::string::npos);
}
