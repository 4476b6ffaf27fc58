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

#include "netsurv/cohort.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "netsurv/errors.hpp"

namespace netsurv {

namespace {

std::string format_full(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.emplace_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.emplace_back(trim(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

// FNV-1a over the duration/event bytes, order-sensitive.
std::uint64_t hash_records(const std::vector<SurvivalRecord>& records) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& r : records) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(r.duration));
        std::memcpy(&bits, &r.duration, sizeof(bits));
        mix(bits);
        mix(r.event ? 1 : 0);
    }
    return h;
}

}  // namespace

Covariate Covariate::categorical(std::string name, std::vector<std::string> levels) {
    return Covariate{std::move(name), CovariateKind::Categorical, std::move(levels)};
}

Covariate Covariate::continuous(std::string name) {
    return Covariate{std::move(name), CovariateKind::Continuous, {}};
}

CovariateSchema::CovariateSchema(std::vector<Covariate> covariates)
    : covariates_(std::move(covariates)) {
    std::unordered_set<std::string> names;
    for (const auto& c : covariates_) {
        if (c.name.empty()) throw UsageError("covariate name must be non-empty");
        if (!names.insert(c.name).second) {
            throw UsageError("duplicate covariate name '" + c.name + "'");
        }
        if (c.kind == CovariateKind::Categorical) {
            std::unordered_set<std::string> seen;
            for (const auto& level : c.levels) {
                if (!seen.insert(level).second) {
                    throw UsageError("duplicate level '" + level + "' for covariate '" +
                                     c.name + "'");
                }
            }
        } else if (!c.levels.empty()) {
            throw UsageError("continuous covariate '" + c.name + "' cannot declare levels");
        }
    }
}

std::optional<std::size_t> CovariateSchema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < covariates_.size(); ++i) {
        if (covariates_[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t CovariateSchema::require(std::string_view name) const {
    const auto idx = index_of(name);
    if (!idx) throw UsageError("unknown covariate '" + std::string(name) + "'");
    return *idx;
}

std::optional<std::size_t> CovariateSchema::level_index(const Covariate& covariate,
                                                        std::string_view level) {
    for (std::size_t i = 0; i < covariate.levels.size(); ++i) {
        if (covariate.levels[i] == level) return i;
    }
    return std::nullopt;
}

Cohort::Cohort(CovariateSchema schema, std::vector<SurvivalRecord> records)
    : schema_(std::move(schema)), records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        const std::string where = "record " + std::to_string(i + 1);
        if (!(r.duration >= 0.0) || !std::isfinite(r.duration)) {
            throw DataError(where + ": duration must be a finite non-negative number");
        }
        if (r.covariates.size() != schema_.size()) {
            throw DataError(where + ": expected " + std::to_string(schema_.size()) +
                            " covariate values, got " + std::to_string(r.covariates.size()));
        }
        for (std::size_t j = 0; j < schema_.size(); ++j) {
            const auto& c = schema_.at(j);
            const double v = r.covariates[j];
            if (c.kind == CovariateKind::Categorical) {
                const double rounded = std::nearbyint(v);
                if (v != rounded || v < 0.0 ||
                    static_cast<std::size_t>(rounded) >= c.levels.size()) {
                    throw DataError(where + ": invalid level index for '" + c.name + "'");
                }
            } else if (!std::isfinite(v)) {
                throw DataError(where + ": non-finite value for '" + c.name + "'");
            }
        }
        if (r.event) ++event_count_;
    }
    digest_ = hash_records(records_);
}

const std::string& Cohort::level_of(const SurvivalRecord& record,
                                    std::size_t covariate) const {
    const auto& c = schema_.at(covariate);
    return c.levels.at(static_cast<std::size_t>(record.covariates.at(covariate)));
}

std::vector<std::string> read_csv_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: no header row");
    auto fields = split_line(line);
    if (fields.size() == 1 && fields[0].empty()) {
        throw DataError("empty file: no header row");
    }
    return fields;
}

CsvConfig canonical_csv_config(const std::vector<std::string>& header,
                               const std::vector<std::string>& categorical_columns) {
    CsvConfig config;
    std::vector<Covariate> covariates;
    for (const auto& name : header) {
        if (name == config.duration_column || name == config.event_column) continue;
        const bool is_cat = std::find(categorical_columns.begin(), categorical_columns.end(),
                                      name) != categorical_columns.end();
        covariates.push_back(is_cat ? Covariate::categorical(name, {})
                                    : Covariate::continuous(name));
    }
    config.schema = CovariateSchema(std::move(covariates));
    return config;
}

Cohort load_csv(std::istream& in, const CsvConfig& config) {
    const auto header = read_csv_header(in);

    auto column_of = [&header](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw DataError("schema error: column '" + name + "' not found in header");
        }
        return static_cast<std::size_t>(it - header.begin());
    };

    const std::size_t duration_col = column_of(config.duration_column);
    const std::size_t event_col = column_of(config.event_column);
    std::vector<std::size_t> covariate_cols;
    covariate_cols.reserve(config.schema.size());
    for (const auto& c : config.schema.covariates()) {
        covariate_cols.push_back(column_of(c.name));
    }

    // Raw pass: keep cells, validate duration/event per row.
    struct RawRow {
        std::size_t line = 0;
        double duration = 0.0;
        bool event = false;
        std::vector<std::string> cells;
    };
    std::vector<RawRow> rows;
    std::string line;
    std::size_t line_number = 1;  // header was line 1
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        const std::string where = "line " + std::to_string(line_number);
        if (fields.size() != header.size()) {
            throw DataError(where + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        RawRow row;
        row.line = line_number;
        if (!parse_double(fields[duration_col], row.duration)) {
            throw DataError(where + ": non-numeric duration '" + fields[duration_col] + "'");
        }
        if (row.duration < 0.0) {
            throw DataError(where + ": negative duration " + fields[duration_col]);
        }
        double event_value = 0.0;
        if (!parse_double(fields[event_col], event_value) ||
            (event_value != 0.0 && event_value != 1.0)) {
            throw DataError(where + ": event must be 0 or 1, got '" + fields[event_col] + "'");
        }
        row.event = event_value == 1.0;
        row.cells.reserve(covariate_cols.size());
        for (const std::size_t col : covariate_cols) row.cells.push_back(fields[col]);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("no data rows");

    // Fill in inferred levels (lexicographic) where the schema omitted them.
    std::vector<Covariate> covariates = config.schema.covariates();
    for (std::size_t j = 0; j < covariates.size(); ++j) {
        auto& c = covariates[j];
        if (c.kind != CovariateKind::Categorical || !c.levels.empty()) continue;
        std::set<std::string> seen;
        for (const auto& row : rows) seen.insert(row.cells[j]);
        c.levels.assign(seen.begin(), seen.end());
    }
    CovariateSchema schema(std::move(covariates));

    std::vector<SurvivalRecord> records;
    records.reserve(rows.size());
    for (const auto& row : rows) {
        const std::string where = "line " + std::to_string(row.line);
        SurvivalRecord record;
        record.duration = row.duration;
        record.event = row.event;
        record.covariates.reserve(schema.size());
        for (std::size_t j = 0; j < schema.size(); ++j) {
            const auto& c = schema.at(j);
            const std::string& cell = row.cells[j];
            if (cell.empty()) {
                throw DataError(where + ": missing value for '" + c.name + "'");
            }
            if (c.kind == CovariateKind::Categorical) {
                const auto idx = CovariateSchema::level_index(c, cell);
                if (!idx) {
                    throw DataError(where + ": unknown level '" + cell + "' for '" +
                                    c.name + "'");
                }
                record.covariates.push_back(static_cast<double>(*idx));
            } else {
                double v = 0.0;
                if (!parse_double(cell, v)) {
                    throw DataError(where + ": non-numeric value '" + cell + "' for '" +
                                    c.name + "'");
                }
                record.covariates.push_back(v);
            }
        }
        records.push_back(std::move(record));
    }
    return Cohort(std::move(schema), std::move(records));
}

void write_csv(std::ostream& out, const Cohort& cohort, std::string_view duration_column,
               std::string_view event_column) {
    out << duration_column << ',' << event_column;
    for (const auto& c : cohort.schema().covariates()) out << ',' << c.name;
    out << '\n';
    for (const auto& r : cohort.records()) {
        out << format_full(r.duration) << ',' << (r.event ? '1' : '0');
        for (std::size_t j = 0; j < cohort.schema().size(); ++j) {
            out << ',';
            if (cohort.schema().at(j).kind == CovariateKind::Categorical) {
                out << cohort.level_of(r, j);
            } else {
                out << format_full(r.covariates[j]);
            }
        }
        out << '\n';
    }
}

SummaryReport summarize(const Cohort& cohort) {
    if (cohort.empty()) throw DataError("cannot summarize an empty cohort");
    SummaryReport report;
    report.n = cohort.size();
    report.events = cohort.event_count();
    report.censored = cohort.censored_count();
    report.censored_percent = 100.0 * static_cast<double>(report.censored) /
                              static_cast<double>(report.n);

    auto moments = [](const std::vector<double>& values) {
        ContinuousSummary s;
        const double n = static_cast<double>(values.size());
        double mean = 0.0;
        for (const double v : values) mean += v;
        mean /= n;
        s.mean = mean;
        if (values.size() < 2) {
            s.sd = 0.0;
            s.has_variance = false;
        } else {
            double ss = 0.0;
            for (const double v : values) ss += (v - mean) * (v - mean);
            s.sd = std::sqrt(ss / (n - 1.0));
        }
        return s;
    };

    std::vector<double> durations;
    durations.reserve(cohort.size());
    for (const auto& r : cohort.records()) durations.push_back(r.duration);
    report.duration = moments(durations);
    report.duration.name = "duration";

    for (std::size_t j = 0; j < cohort.schema().size(); ++j) {
        const auto& c = cohort.schema().at(j);
        if (c.kind == CovariateKind::Categorical) {
            CategoricalSummary cs;
            cs.name = c.name;
            cs.levels.resize(c.levels.size());
            for (std::size_t l = 0; l < c.levels.size(); ++l) {
                cs.levels[l].level = c.levels[l];
            }
            for (const auto& r : cohort.records()) {
                auto& ls = cs.levels[static_cast<std::size_t>(r.covariates[j])];
                ++ls.count;
                if (!r.event) ++ls.censored;
            }
            for (auto& ls : cs.levels) {
                ls.percent = 100.0 * static_cast<double>(ls.count) /
                             static_cast<double>(report.n);
                ls.censored_percent =
                    ls.count == 0 ? 0.0
                                  : 100.0 * static_cast<double>(ls.censored) /
                                        static_cast<double>(ls.count);
            }
            report.categorical.push_back(std::move(cs));
        } else {
            std::vector<double> values;
            values.reserve(cohort.size());
            for (const auto& r : cohort.records()) values.push_back(r.covariates[j]);
            ContinuousSummary s = moments(values);
            s.name = c.name;
            report.continuous.push_back(std::move(s));
        }
    }
    return report;
}

std::vector<std::pair<std::string, Cohort>> split_by_level(const Cohort& cohort,
                                                           std::string_view variable) {
    const std::size_t j = cohort.schema().require(variable);
    const auto& c = cohort.schema().at(j);
    if (c.kind != CovariateKind::Categorical) {
        throw UsageError("covariate '" + std::string(variable) + "' is not categorical");
    }
    std::vector<std::vector<SurvivalRecord>> buckets(c.levels.size());
    for (const auto& r : cohort.records()) {
        buckets[static_cast<std::size_t>(r.covariates[j])].push_back(r);
    }
    std::vector<std::pair<std::string, Cohort>> result;
    result.reserve(c.levels.size());
    for (std::size_t l = 0; l < c.levels.size(); ++l) {
        result.emplace_back(c.levels[l],
                            Cohort(cohort.schema(), std::move(buckets[l])));
    }
    return result;
}

}  // namespace netsurv
