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

#include <sstream>

#include "netsurv/cohort.hpp"
#include "netsurv/errors.hpp"
#include "support/generators.hpp"

using namespace netsurv;

namespace {

CsvConfig paper_like_config() {
    CsvConfig config;
    config.schema = CovariateSchema({Covariate::categorical("form", {"1", "2", "3"}),
                                     Covariate::continuous("profit")});
    return config;
}

}  // namespace

TEST_CASE("load_csv parses a minimal file") {
    std::istringstream in("age,status\n5,1\n");
    CsvConfig config;
    const Cohort cohort = load_csv(in, config);
    CHECK(cohort.size() == 1);
    CHECK(cohort.records()[0].duration == 5.0);
    CHECK(cohort.records()[0].event);
}

TEST_CASE("load_csv validates rows") {
    CsvConfig config;
    SUBCASE("negative duration names the line") {
        std::istringstream in("age,status\n3,1\n-1,0\n");
        CHECK_THROWS_WITH_AS(load_csv(in, config), doctest::Contains("line 3"), DataError);
    }
    SUBCASE("non-numeric duration") {
        std::istringstream in("age,status\nabc,1\n");
        CHECK_THROWS_AS(load_csv(in, config), DataError);
    }
    SUBCASE("event outside 0/1") {
        std::istringstream in("age,status\n3,2\n");
        CHECK_THROWS_AS(load_csv(in, config), DataError);
    }
    SUBCASE("missing column") {
        std::istringstream in("age,dead\n3,1\n");
        CHECK_THROWS_WITH_AS(load_csv(in, config), doctest::Contains("status"), DataError);
    }
    SUBCASE("empty file") {
        std::istringstream in("");
        CHECK_THROWS_AS(load_csv(in, config), DataError);
    }
    SUBCASE("header only") {
        std::istringstream in("age,status\n");
        CHECK_THROWS_AS(load_csv(in, config), DataError);
    }
}

TEST_CASE("load_csv checks categorical levels and infers when omitted") {
    SUBCASE("declared levels enforced") {
        std::istringstream in("age,status,form,profit\n1,1,4,0.5\n");
        CHECK_THROWS_WITH_AS(load_csv(in, paper_like_config()),
                             doctest::Contains("unknown level"), DataError);
    }
    SUBCASE("inference is lexicographic") {
        std::istringstream in("age,status,form,profit\n1,1,b,0.5\n2,0,a,1.5\n");
        CsvConfig config;
        config.schema = CovariateSchema(
            {Covariate::categorical("form", {}), Covariate::continuous("profit")});
        const Cohort cohort = load_csv(in, config);
        const auto& form = cohort.schema().at(0);
        REQUIRE(form.levels.size() == 2);
        CHECK(form.levels[0] == "a");
        CHECK(form.levels[1] == "b");
        CHECK(cohort.level_of(cohort.records()[0], 0) == "b");
    }
}

TEST_CASE("csv round-trip preserves values exactly") {
    std::istringstream in(
        "age,status,form,profit\n"
        "0.1234567890123456,1,2,1e-7\n"
        "12345.6789,0,1,-3.25\n");
    const Cohort first = load_csv(in, paper_like_config());

    std::ostringstream out;
    write_csv(out, first);
    std::istringstream again(out.str());
    const Cohort second = load_csv(again, paper_like_config());

    REQUIRE(second.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(second.records()[i].duration == first.records()[i].duration);
        CHECK(second.records()[i].event == first.records()[i].event);
        CHECK(second.records()[i].covariates == first.records()[i].covariates);
    }
}

TEST_CASE("summarize reproduces the published form percentages") {
    // 352/111/37 of 500 -> 70.4 / 22.2 / 7.4
    CovariateSchema schema({Covariate::categorical("form", {"1", "2", "3"})});
    std::vector<SurvivalRecord> records;
    auto add = [&records](std::size_t count, double level) {
        for (std::size_t i = 0; i < count; ++i) {
            records.push_back(SurvivalRecord{1.0, true, {level}});
        }
    };
    add(352, 0.0);
    add(111, 1.0);
    add(37, 2.0);
    const Cohort cohort(schema, std::move(records));
    const SummaryReport report = summarize(cohort);
    REQUIRE(report.categorical.size() == 1);
    const auto& levels = report.categorical[0].levels;
    REQUIRE(levels.size() == 3);
    CHECK(levels[0].count == 352);
    CHECK(levels[0].percent == doctest::Approx(70.4));
    CHECK(levels[1].percent == doctest::Approx(22.2));
    CHECK(levels[2].percent == doctest::Approx(7.4));

    double total = 0.0;
    for (const auto& l : levels) total += l.percent;
    CHECK(total == doctest::Approx(100.0).epsilon(0.001));
}

TEST_CASE("summarize continuous moments") {
    CovariateSchema schema({Covariate::continuous("x")});
    std::vector<SurvivalRecord> records = {
        {1.0, true, {1.0}}, {1.0, true, {2.0}}, {1.0, false, {3.0}}};
    const SummaryReport report = summarize(Cohort(schema, std::move(records)));
    REQUIRE(report.continuous.size() == 1);
    CHECK(report.continuous[0].mean == doctest::Approx(2.0));
    CHECK(report.continuous[0].sd == doctest::Approx(1.0));
    CHECK(report.continuous[0].has_variance);
}

TEST_CASE("summarize single-record cohort flags missing variance") {
    CovariateSchema schema({Covariate::categorical("g", {"only"})});
    const SummaryReport report =
        summarize(Cohort(schema, {SurvivalRecord{2.0, true, {0.0}}}));
    CHECK(report.categorical[0].levels[0].percent == doctest::Approx(100.0));
    CHECK_FALSE(report.duration.has_variance);
    CHECK(report.duration.sd == 0.0);
}

TEST_CASE("summarize rejects an empty cohort") {
    CHECK_THROWS_AS(summarize(Cohort{}), DataError);
}

TEST_CASE("split_by_level partitions") {
    CovariateSchema schema({Covariate::categorical("g", {"A", "B"})});
    std::vector<SurvivalRecord> records = {{1.0, true, {0.0}},
                                           {2.0, false, {1.0}},
                                           {3.0, true, {0.0}},
                                           {4.0, true, {1.0}},
                                           {5.0, false, {0.0}}};
    const Cohort cohort(schema, std::move(records));
    const auto parts = split_by_level(cohort, "g");
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].first == "A");
    CHECK(parts[0].second.size() == 3);
    CHECK(parts[1].second.size() == 2);
    // order preserved within each part
    CHECK(parts[0].second.records()[0].duration == 1.0);
    CHECK(parts[0].second.records()[1].duration == 3.0);
    CHECK(parts[0].second.records()[2].duration == 5.0);
    // partition property
    CHECK(parts[0].second.size() + parts[1].second.size() == cohort.size());

    CHECK_THROWS_AS(split_by_level(cohort, "missing"), UsageError);
}

TEST_CASE("split_by_level on a property-test cohort is a partition") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Cohort cohort = testing::two_group_exponential(seed, 13, 1.0, 2.0, 1.5);
        const auto parts = split_by_level(cohort, "group");
        std::size_t total = 0;
        for (const auto& [level, sub] : parts) total += sub.size();
        CHECK(total == cohort.size());
    }
}

TEST_CASE("canonical config maps paper columns") {
    const std::vector<std::string> header = {"age",      "status",  "form",
                                             "strategy", "profit",  "mcost",
                                             "netbirths", "stock1"};
    const CsvConfig config = canonical_csv_config(header);
    CHECK(config.schema.size() == 6);
    CHECK(config.schema.at(0).name == "form");
    CHECK(config.schema.at(0).kind == CovariateKind::Categorical);
    CHECK(config.schema.at(1).kind == CovariateKind::Categorical);
    CHECK(config.schema.at(2).kind == CovariateKind::Continuous);
}

TEST_CASE("schema rejects duplicates") {
    CHECK_THROWS_AS(CovariateSchema({Covariate::continuous("x"), Covariate::continuous("x")}),
                    UsageError);
    CHECK_THROWS_AS(CovariateSchema({Covariate::categorical("g", {"a", "a"})}), UsageError);
}
