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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netsurv {

enum class CovariateKind { Categorical, Continuous };

/// One covariate declaration.  Categorical levels are ordered; the first
/// level is the reference for dummy coding downstream.
struct Covariate {
    std::string name;
    CovariateKind kind = CovariateKind::Continuous;
    std::vector<std::string> levels;  // categorical only

    static Covariate categorical(std::string name, std::vector<std::string> levels);
    static Covariate continuous(std::string name);
};

/// Ordered covariate declarations.  Names are unique; categorical level
/// lists are duplicate-free (an empty list is permitted only until CSV
/// inference fills it in).
class CovariateSchema {
public:
    CovariateSchema() = default;
    explicit CovariateSchema(std::vector<Covariate> covariates);

    const std::vector<Covariate>& covariates() const { return covariates_; }
    std::size_t size() const { return covariates_.size(); }
    const Covariate& at(std::size_t i) const { return covariates_.at(i); }
    std::optional<std::size_t> index_of(std::string_view name) const;

    /// Index of a known covariate; throws UsageError for unknown names.
    std::size_t require(std::string_view name) const;

    /// Index of a level within a categorical covariate, if present.
    static std::optional<std::size_t> level_index(const Covariate& covariate,
                                                  std::string_view level);

private:
    std::vector<Covariate> covariates_;
};

/// One observation: follow-up duration, whether the event (death) was
/// observed (event = false means right-censored), and one value per
/// schema entry.  Categorical cells hold the level index.
struct SurvivalRecord {
    double duration = 0.0;
    bool event = false;
    std::vector<double> covariates;
};

/// An immutable set of records conforming to a schema.  Construction
/// validates every record; afterwards the cohort is safe to share
/// across threads.
class Cohort {
public:
    Cohort() = default;
    Cohort(CovariateSchema schema, std::vector<SurvivalRecord> records);

    const CovariateSchema& schema() const { return schema_; }
    const std::vector<SurvivalRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::size_t event_count() const { return event_count_; }
    std::size_t censored_count() const { return records_.size() - event_count_; }

    /// Level label of a categorical cell.
    const std::string& level_of(const SurvivalRecord& record, std::size_t covariate) const;

    /// Order-insensitive digest of (duration, event) pairs; lets fits
    /// check they were produced from the same data.
    std::uint64_t data_digest() const { return digest_; }

private:
    CovariateSchema schema_;
    std::vector<SurvivalRecord> records_;
    std::size_t event_count_ = 0;
    std::uint64_t digest_ = 0;
};

struct CsvConfig {
    std::string duration_column = "age";
    std::string event_column = "status";
    /// Schema of covariate columns.  Categorical entries with empty level
    /// lists get their levels inferred from the data (lexicographic).
    CovariateSchema schema;
};

/// Parse a CSV stream (header row required).  Row-level problems raise
/// DataError naming the offending line.
Cohort load_csv(std::istream& in, const CsvConfig& config);

/// Canonical paper-shaped config: age/status plus every other header
/// column as a covariate; columns listed in categorical_columns (default
/// form and strategy when present) become categorical with inferred levels.
CsvConfig canonical_csv_config(const std::vector<std::string>& header,
                               const std::vector<std::string>& categorical_columns = {
                                   "form", "strategy"});

/// Read just the header row of a CSV stream (consumes one line).
std::vector<std::string> read_csv_header(std::istream& in);

/// Serialize with full round-trip precision.
void write_csv(std::ostream& out, const Cohort& cohort,
               std::string_view duration_column = "age",
               std::string_view event_column = "status");

struct LevelSummary {
    std::string level;
    std::size_t count = 0;
    double percent = 0.0;
    std::size_t censored = 0;
    double censored_percent = 0.0;
};

struct CategoricalSummary {
    std::string name;
    std::vector<LevelSummary> levels;
};

struct ContinuousSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    bool has_variance = true;  // false when n < 2 (sd reported as 0)
};

struct SummaryReport {
    std::size_t n = 0;
    std::size_t events = 0;
    std::size_t censored = 0;
    double censored_percent = 0.0;
    ContinuousSummary duration;  // the response itself, Table-2 style
    std::vector<CategoricalSummary> categorical;
    std::vector<ContinuousSummary> continuous;
};

/// Descriptive summary: level counts/percentages and censoring per
/// categorical variable, mean and sample SD per continuous variable.
SummaryReport summarize(const Cohort& cohort);

/// Partition by the levels of a categorical covariate, level order as
/// declared.  Empty levels yield empty sub-cohorts.
std::vector<std::pair<std::string, Cohort>> split_by_level(const Cohort& cohort,
                                                           std::string_view variable);

}  // namespace netsurv
