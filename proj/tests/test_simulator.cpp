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

#include <cmath>
#include <sstream>

#include "netsurv/errors.hpp"
#include "netsurv/simulator.hpp"

using namespace netsurv;

namespace {

SimConfig exponential_config(std::size_t n, std::uint64_t seed) {
    SimConfig config;
    config.n = n;
    config.seed = seed;
    config.distribution = AftDistribution::Exponential;  // rate 1 at intercept 0
    config.intercept = 0.0;
    config.scale = 1.0;
    return config;
}

}  // namespace

TEST_CASE("exponential preset has unit mean at n = 10000") {
    const Cohort cohort = simulate_cohort(exponential_config(10000, 20260809));
    double mean = 0.0;
    for (const auto& r : cohort.records()) {
        CHECK(r.event);
        CHECK(r.duration > 0.0);
        mean += r.duration;
    }
    mean /= static_cast<double>(cohort.size());
    CHECK(mean > 0.97);
    CHECK(mean < 1.03);
}

TEST_CASE("administrative horizon reproduces the closed-form censor fraction") {
    SimConfig config = exponential_config(10000, 7);
    config.censoring = {Censoring::Mode::Horizon, 1.2};
    const Cohort cohort = simulate_cohort(config);
    const double expected = std::exp(-1.2);
    const double observed =
        static_cast<double>(cohort.censored_count()) / static_cast<double>(cohort.size());
    CHECK(observed == doctest::Approx(expected).epsilon(0.0).scale(1.0).epsilon(0.08));
    CHECK(std::fabs(observed - expected) < 0.02);
    for (const auto& r : cohort.records()) {
        if (!r.event) CHECK(r.duration == 1.2);
        if (r.event) CHECK(r.duration <= 1.2);
    }
}

TEST_CASE("fraction censoring hits the target count exactly") {
    SimConfig config = exponential_config(500, 3);
    config.censoring = {Censoring::Mode::Fraction, 0.244};
    const Cohort cohort = simulate_cohort(config);
    CHECK(cohort.censored_count() == 122);
    CHECK(cohort.event_count() == 378);
}

TEST_CASE("identical config and seed give identical cohorts") {
    const SimConfig config = paper_preset();
    SimConfig seeded = config;
    seeded.seed = 99;
    const Cohort a = simulate_cohort(seeded);
    const Cohort b = simulate_cohort(seeded);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.records()[i].duration == b.records()[i].duration);
        CHECK(a.records()[i].event == b.records()[i].event);
        CHECK(a.records()[i].covariates == b.records()[i].covariates);
    }
    // byte-identical CSV export
    std::ostringstream csv_a, csv_b;
    write_csv(csv_a, a);
    write_csv(csv_b, b);
    CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("growing n leaves earlier records untouched") {
    SimConfig small = exponential_config(50, 11);
    SimConfig large = exponential_config(200, 11);
    const Cohort a = simulate_cohort(small);
    const Cohort b = simulate_cohort(large);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.records()[i].duration == b.records()[i].duration);
    }
}

TEST_CASE("paper preset matches the canonical schema shape") {
    SimConfig config = paper_preset();
    config.seed = 7;
    const Cohort cohort = simulate_cohort(config);
    CHECK(cohort.size() == 500);
    CHECK(cohort.schema().size() == 11);  // 13 columns = age + status + these
    CHECK(cohort.schema().at(0).name == "form");
    CHECK(cohort.schema().at(1).name == "strategy");
    CHECK(cohort.schema().at(1).levels.size() == 8);
    // 24.4% of 500
    CHECK(cohort.censored_count() == 122);

    std::ostringstream csv;
    write_csv(csv, cohort);
    const std::string header = csv.str().substr(0, csv.str().find('\n'));
    CHECK(header ==
          "age,status,form,strategy,profit,mcost,netbirths,netdeaths,nodebirths,"
          "nodedeaths,stock1,stock2,stock3");
}

TEST_CASE("paper preset marginals track Table 1") {
    SimConfig config = paper_preset();
    config.seed = 12345;
    const Cohort cohort = simulate_cohort(config);
    const SummaryReport report = summarize(cohort);
    const auto& form = report.categorical[0];
    // multinomial(500, 0.704) has sd ~ 10; allow 4 sigma
    CHECK(std::fabs(static_cast<double>(form.levels[0].count) - 352.0) < 42.0);
    CHECK(std::fabs(static_cast<double>(form.levels[1].count) - 111.0) < 40.0);
    const auto& profit = report.continuous[0];
    CHECK(profit.name == "profit");
    CHECK(profit.mean == doctest::Approx(9.421).epsilon(0.1));
}

TEST_CASE("config file round-trips") {
    SimConfig config = paper_preset();
    config.seed = 4242;
    std::ostringstream out;
    write_config(out, config);
    std::istringstream in(out.str());
    const SimConfig parsed = parse_config(in);

    CHECK(parsed.n == config.n);
    CHECK(parsed.seed == config.seed);
    CHECK(parsed.distribution == config.distribution);
    CHECK(parsed.intercept == config.intercept);
    CHECK(parsed.scale == config.scale);
    REQUIRE(parsed.covariates.size() == config.covariates.size());

    // identical cohorts from the round-tripped config
    const Cohort a = simulate_cohort(config);
    const Cohort b = simulate_cohort(parsed);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.records()[i].duration == b.records()[i].duration);
    }
}

TEST_CASE("config parser rejects malformed input") {
    {
        std::istringstream in("n 500\n");
        CHECK_THROWS_AS(parse_config(in), UsageError);
    }
    {
        std::istringstream in("n = 500\ncovariate = g categorical levels a,b probs 0.5,0.4\n");
        CHECK_THROWS_AS(parse_config(in), UsageError);  // probs sum != 1
    }
    {
        std::istringstream in("n = 500\nbogus = 1\n");
        CHECK_THROWS_AS(parse_config(in), UsageError);
    }
}

TEST_CASE("invalid configs are usage errors") {
    SimConfig config = exponential_config(0, 1);
    CHECK_THROWS_AS(simulate_cohort(config), UsageError);

    config = exponential_config(10, 1);
    config.scale = -1.0;
    CHECK_THROWS_AS(simulate_cohort(config), UsageError);

    config = exponential_config(10, 1);
    config.censoring = {Censoring::Mode::Fraction, 0.999};
    CHECK_THROWS_AS(simulate_cohort(config), UsageError);
}
