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

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "netsurv/errors.hpp"
#include "netsurv/json_io.hpp"
#include "netsurv/simulator.hpp"
#include "netsurv/special.hpp"
#include "render.hpp"

namespace {

using namespace netsurv;
using namespace netsurv::cli;
using nlohmann::json;

enum class Format { TableFmt, JsonFmt, CsvFmt };

Format parse_format(const std::string& text) {
    if (text == "table") return Format::TableFmt;
    if (text == "json") return Format::JsonFmt;
    if (text == "csv") return Format::CsvFmt;
    throw UsageError("unknown format '" + text + "' (expected table, json, or csv)");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find(',', start);
        if (pos == std::string::npos) {
            if (start < text.size()) out.push_back(text.substr(start));
            break;
        }
        if (pos > start) out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<double> split_numbers(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
            throw UsageError("bad " + what + " value '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw UsageError(what + " list is empty");
    return out;
}

/// Shared I/O options: input CSV, output destination, format.
struct IoOptions {
    std::string input;
    std::string output;  // empty = stdout
    std::string format = "table";
    std::string categorical = "form,strategy";

    Format parsed_format() const { return parse_format(format); }

    Cohort load() const {
        std::string text;
        if (input == "-") {
            std::ostringstream buffer;
            buffer << std::cin.rdbuf();
            text = buffer.str();
        } else {
            std::ifstream file(input);
            if (!file) throw DataError("cannot open '" + input + "'");
            std::ostringstream buffer;
            buffer << file.rdbuf();
            text = buffer.str();
        }
        std::istringstream header_stream(text);
        const auto header = read_csv_header(header_stream);
        const CsvConfig config = canonical_csv_config(header, split_list(categorical));
        std::istringstream data_stream(text);
        return load_csv(data_stream, config);
    }

    template <typename Fn>
    void with_output(Fn&& fn) const {
        if (output.empty()) {
            fn(std::cout);
        } else {
            std::ofstream file(output);
            if (!file) throw DataError("cannot open '" + output + "' for writing");
            fn(file);
        }
    }

    void emit_json(const json& value) const {
        with_output([&value](std::ostream& out) { out << value.dump(2) << '\n'; });
    }
};

void add_io(CLI::App* cmd, IoOptions& io, bool needs_input = true) {
    if (needs_input) {
        cmd->add_option("--input,-i", io.input, "input CSV file ('-' for stdin)")
            ->required();
        cmd->add_option("--categorical", io.categorical,
                        "comma-separated columns to treat as categorical");
    }
    cmd->add_option("--format,-f", io.format, "output format: table, json, csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->add_option("--output,-o", io.output, "write output here instead of stdout");
}

std::string weight_display(const WeightSpec& weight) {
    switch (weight.kind) {
        case WeightSpec::Kind::LogRank:
            return "Log-rank";
        case WeightSpec::Kind::Gehan:
            return "Gehan-Wilcoxon";
        case WeightSpec::Kind::PetoPeto:
            return "Peto-Peto";
        case WeightSpec::Kind::FlemingHarrington:
            return "FH(" + fmt6(weight.rho) + "," + fmt6(weight.gamma) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- summarize

void run_summarize(const IoOptions& io) {
    const Cohort cohort = io.load();
    const SummaryReport report = summarize(cohort);
    switch (io.parsed_format()) {
        case Format::JsonFmt:
            io.emit_json(to_json(report));
            return;
        case Format::CsvFmt:
            io.with_output([&report](std::ostream& out) {
                out << "kind,variable,level,n,percent,censored,censored_percent,mean,sd\n";
                for (const auto& c : report.categorical) {
                    for (const auto& l : c.levels) {
                        out << "categorical," << c.name << ',' << l.level << ',' << l.count
                            << ',' << l.percent << ',' << l.censored << ','
                            << l.censored_percent << ",,\n";
                    }
                }
                out << "continuous,duration,,,,,," << report.duration.mean << ','
                    << report.duration.sd << '\n';
                for (const auto& c : report.continuous) {
                    out << "continuous," << c.name << ",,,,,," << c.mean << ',' << c.sd
                        << '\n';
                }
            });
            return;
        case Format::TableFmt:
            break;
    }
    io.with_output([&report](std::ostream& out) {
        Table categorical;
        categorical.title = "Distribution of the categorical variables (n = " +
                            std::to_string(report.n) + ")";
        categorical.header = {"Categorical variables", "N (%)", "Censored (%)"};
        categorical.add_row({"status", "", ""});
        categorical.add_row({"  0 - alive",
                             fmt_count_pct(report.censored, report.censored_percent), ""});
        categorical.add_row({"  1 - dead",
                             fmt_count_pct(report.events, 100.0 - report.censored_percent),
                             ""});
        for (const auto& c : report.categorical) {
            categorical.add_row({c.name, "", ""});
            for (const auto& l : c.levels) {
                categorical.add_row({"  " + l.level, fmt_count_pct(l.count, l.percent),
                                     fmt_count_pct(l.censored, l.censored_percent)});
            }
        }
        categorical.print(out);
        out << '\n';
        Table continuous;
        continuous.title = "Mean and standard deviation for the scale variables";
        continuous.header = {"Variable", "Mean (SD)"};
        continuous.add_row(
            {"duration", fmt6(report.duration.mean) + " (" + fmt6(report.duration.sd) + ")"});
        for (const auto& c : report.continuous) {
            continuous.add_row({c.name, fmt6(c.mean) + " (" + fmt6(c.sd) + ")"});
        }
        continuous.print(out);
    });
}

// ----------------------------------------------------------------------- km

struct KmOptions {
    IoOptions io;
    std::string by;
    std::string at;
    std::string conf = "loglog";
    std::string plot_data;
};

void run_km(const KmOptions& options) {
    const ConfidenceStyle style = options.conf == "plain" ? ConfidenceStyle::Plain
                                                          : ConfidenceStyle::LogLog;
    std::vector<double> at_times;
    if (!options.at.empty()) {
        at_times = split_numbers(options.at, "--at");
        for (const double t : at_times) {
            if (t < 0.0) throw UsageError("--at times must be non-negative");
        }
    }
    const Cohort cohort = options.io.load();

    std::vector<std::pair<std::string, SurvivalCurve>> curves;
    if (options.by.empty()) {
        curves.emplace_back("", km_fit(cohort, style));
    } else {
        curves = km_stratified(cohort, options.by, style);
    }

    if (!options.plot_data.empty()) {
        std::ofstream file(options.plot_data);
        if (!file) throw DataError("cannot open '" + options.plot_data + "' for writing");
        if (options.by.empty()) {
            write_curve_csv(file, curves[0].second);
        } else {
            write_stratified_csv(file, curves);
        }
    }

    switch (options.io.parsed_format()) {
        case Format::JsonFmt: {
            json out{{"by", options.by.empty() ? json(nullptr) : json(options.by)},
                     {"conf", options.conf},
                     {"curves", json::array()}};
            for (const auto& [level, curve] : curves) {
                json c = to_json(curve);
                c["level"] = level.empty() ? json(nullptr) : json(level);
                out["curves"].push_back(std::move(c));
            }
            options.io.emit_json(out);
            return;
        }
        case Format::CsvFmt:
            options.io.with_output([&](std::ostream& out) {
                if (options.by.empty()) {
                    write_curve_csv(out, curves[0].second);
                } else {
                    write_stratified_csv(out, curves);
                }
            });
            return;
        case Format::TableFmt:
            break;
    }

    options.io.with_output([&](std::ostream& out) {
        if (!at_times.empty()) {
            Table table;
            table.title = options.by.empty()
                              ? "Survival estimates"
                              : "Survival estimates for each level of " + options.by;
            table.header = {options.by.empty() ? "curve" : options.by};
            for (const double t : at_times) table.header.push_back(fmt6(t));
            for (const auto& [level, curve] : curves) {
                std::vector<std::string> row = {level.empty() ? "all" : level};
                for (const double t : at_times) {
                    // beyond the last observed time the step value is a
                    // guess; mark it explicitly instead
                    row.push_back(t > curve.max_observed_time ? "-"
                                                              : fmt6(curve.survival_at(t)));
                }
                table.add_row(std::move(row));
            }
            table.print(out);
            return;
        }
        Table table;
        table.title = "Kaplan-Meier estimates";
        table.header = {options.by.empty() ? "curve" : options.by, "n", "events", "median"};
        for (const auto& [level, curve] : curves) {
            const auto median = curve.median();
            table.add_row({level.empty() ? "all" : level, std::to_string(curve.n),
                           std::to_string(curve.events),
                           median ? fmt6(*median) : "-"});
        }
        table.print(out);
    });
}

// --------------------------------------------------------------------- test

struct TestOptions {
    IoOptions io;
    std::string by;
    std::string weight = "logrank";
    double rho = 0.0;
    double gamma = 0.0;
};

void run_test(const TestOptions& options) {
    const std::vector<std::string> variables = split_list(options.by);
    if (variables.empty()) throw UsageError("--by needs at least one variable");
    std::vector<WeightSpec> weights;
    for (const auto& name : split_list(options.weight)) {
        weights.push_back(WeightSpec::parse(name, options.rho, options.gamma));
    }
    if (weights.empty()) throw UsageError("--weight needs at least one weight");

    const Cohort cohort = options.io.load();
    struct Entry {
        std::string variable;
        RankTestResult result;
    };
    std::vector<Entry> entries;
    for (const auto& variable : variables) {
        for (const auto& weight : weights) {
            entries.push_back({variable, weighted_logrank(cohort, variable, weight)});
        }
    }

    switch (options.io.parsed_format()) {
        case Format::JsonFmt: {
            json out{{"results", json::array()}};
            for (const auto& entry : entries) {
                json r = to_json(entry.result);
                r["variable"] = entry.variable;
                out["results"].push_back(std::move(r));
            }
            options.io.emit_json(out);
            return;
        }
        case Format::CsvFmt:
            options.io.with_output([&entries](std::ostream& out) {
                out << "variable,weight,chisq,df,p\n";
                for (const auto& entry : entries) {
                    out << entry.variable << ',' << entry.result.weight.label() << ','
                        << entry.result.chi_square << ',' << entry.result.df << ','
                        << entry.result.p_value << '\n';
                }
            });
            return;
        case Format::TableFmt:
            break;
    }

    options.io.with_output([&](std::ostream& out) {
        Table table;
        table.title = "Tests for comparison of survival curves";
        table.header = {"Variable"};
        for (const auto& weight : weights) {
            table.header.push_back(weight_display(weight) + " X2(df)");
            table.header.push_back("p-value");
        }
        for (const auto& variable : variables) {
            std::vector<std::string> row = {variable};
            for (const auto& entry : entries) {
                if (entry.variable != variable) continue;
                row.push_back(fmt6(entry.result.chi_square) + " (" +
                              std::to_string(entry.result.df) + ")");
                row.push_back(fmt_p(entry.result.p_value));
            }
            table.add_row(std::move(row));
        }
        table.print(out);
    });
}

// ----------------------------------------------------------------- pairwise

struct PairwiseOptions {
    IoOptions io;
    std::string by;
    std::string weight = "peto";
    double rho = 0.0;
    double gamma = 0.0;
    bool raw = false;
};

void run_pairwise(const PairwiseOptions& options) {
    const WeightSpec weight = WeightSpec::parse(options.weight, options.rho, options.gamma);
    const Cohort cohort = options.io.load();
    const PairwiseMatrix matrix = pairwise_tests(cohort, options.by, weight);

    switch (options.io.parsed_format()) {
        case Format::JsonFmt:
            options.io.emit_json(to_json(matrix));
            return;
        case Format::CsvFmt:
            options.io.with_output([&](std::ostream& out) {
                write_pairwise_csv(out, matrix, !options.raw);
            });
            return;
        case Format::TableFmt:
            break;
    }

    options.io.with_output([&](std::ostream& out) {
        Table table;
        table.title = "P-values for the pairwise comparisons (" + weight_display(weight) +
                      (options.raw ? ", raw)" : ", BH-adjusted)");
        const std::size_t k = matrix.levels.size();
        table.header = {""};
        for (std::size_t j = 0; j + 1 < k; ++j) table.header.push_back(matrix.levels[j]);
        for (std::size_t i = 1; i < k; ++i) {
            std::vector<std::string> row = {matrix.levels[i]};
            for (std::size_t j = 0; j + 1 < k; ++j) {
                if (j < i) {
                    const double p = options.raw ? matrix.raw_at(j, i)
                                                 : matrix.adjusted_at(j, i);
                    row.push_back(fmt_p(p));
                } else {
                    row.push_back("-");
                }
            }
            table.add_row(std::move(row));
        }
        table.print(out);
        out << matrix.comparisons() << " pairwise comparisons\n";
    });
}

// ------------------------------------------------------------------- phtest

struct PhTestOptions {
    IoOptions io;
    std::string vars;
    std::string transform = "km";
    std::string ties = "efron";
};

void run_phtest(const PhTestOptions& options) {
    const TimeTransform transform = parse_transform(options.transform);
    const TiesMethod ties = parse_ties(options.ties);
    const std::vector<std::string> variables = split_list(options.vars);
    if (variables.empty()) throw UsageError("--vars needs at least one variable");

    const Cohort cohort = options.io.load();
    const CoxFit fit = cox_fit(cohort, variables, ties);
    const PhTestResult result = ph_test(fit, cohort, transform);

    switch (options.io.parsed_format()) {
        case Format::JsonFmt:
            options.io.emit_json(to_json(result));
            return;
        case Format::CsvFmt:
            options.io.with_output([&result](std::ostream& out) {
                out << "column,chisq,df,p\n";
                for (const auto& c : result.columns) {
                    out << c.name << ',' << c.chi_square << ",1," << c.p_value << '\n';
                }
                out << "GLOBAL," << result.global_chi_square << ',' << result.global_df
                    << ',' << result.global_p << '\n';
            });
            return;
        case Format::TableFmt:
            break;
    }

    options.io.with_output([&](std::ostream& out) {
        Table table;
        table.title = "Grambsch-Therneau test of proportional hazards (transform = " +
                      transform_name(result.transform) + ", ties = " + ties_name(ties) + ")";
        table.header = {"Covariable", "chisq", "df", "p-value"};
        for (const auto& c : result.columns) {
            table.add_row({c.name, fmt6(c.chi_square), "1", fmt_p(c.p_value)});
        }
        table.add_row({"GLOBAL", fmt6(result.global_chi_square),
                       std::to_string(result.global_df), fmt_p(result.global_p)});
        table.print(out);
    });
}

// ---------------------------------------------------------------------- aft

struct AftCliOptions {
    IoOptions io;
    std::string vars;
    std::string dist = "loglogistic";
    bool univariable = false;
};

void aft_table(std::ostream& out, const AftFit& fit) {
    Table table;
    table.title = distribution_name(fit.distribution) +
                  " survival regression (n = " + std::to_string(fit.n) +
                  ", events = " + std::to_string(fit.events) + ")";
    table.header = {"Covariable", "beta", "se", "p-value", "accel"};
    table.add_row({"(intercept)", fmt6(fit.intercept), fmt6(fit.intercept_se),
                   fmt_p(special::wald_p_value(fit.intercept / fit.intercept_se)), "-"});
    for (std::size_t j = 0; j < fit.column_names.size(); ++j) {
        const double beta = fit.beta(static_cast<Eigen::Index>(j));
        table.add_row({fit.column_names[j], fmt6(beta),
                       fmt6(fit.beta_se(static_cast<Eigen::Index>(j))),
                       fmt_p(fit.p_value(j)), fmt6(std::exp(beta))});
    }
    table.print(out);
    out << "scale  " << fmt6(fit.scale) << (fit.scale_fixed ? " (fixed)" : "") << '\n';
    out << "loglik " << fmt6(fit.loglik) << "   AIC " << fmt6(fit.aic) << '\n';
}

void run_aft(const AftCliOptions& options) {
    const AftDistribution dist = parse_distribution(options.dist);
    const std::vector<std::string> variables = split_list(options.vars);
    if (variables.empty()) throw UsageError("--vars needs at least one variable");
    const Cohort cohort = options.io.load();

    if (!options.univariable) {
        const AftFit fit = aft_fit(cohort, variables, dist);
        switch (options.io.parsed_format()) {
            case Format::JsonFmt:
                options.io.emit_json(to_json(fit));
                return;
            case Format::CsvFmt:
                options.io.with_output([&fit](std::ostream& out) {
                    out << "name,beta,se,p,accel_factor\n";
                    out << "(intercept)," << fit.intercept << ',' << fit.intercept_se << ','
                        << special::wald_p_value(fit.intercept / fit.intercept_se) << ",\n";
                    for (std::size_t j = 0; j < fit.column_names.size(); ++j) {
                        const double beta = fit.beta(static_cast<Eigen::Index>(j));
                        out << fit.column_names[j] << ',' << beta << ','
                            << fit.beta_se(static_cast<Eigen::Index>(j)) << ','
                            << fit.p_value(j) << ',' << std::exp(beta) << '\n';
                    }
                });
                return;
            case Format::TableFmt:
                options.io.with_output([&fit](std::ostream& out) { aft_table(out, fit); });
                return;
        }
    }

    const auto rows = univariable_screen(cohort, variables, dist);
    switch (options.io.parsed_format()) {
        case Format::JsonFmt:
            options.io.emit_json(to_json(rows, dist));
            return;
        case Format::CsvFmt:
            options.io.with_output([&rows](std::ostream& out) {
                out << "variable,name,beta,se,p,accel_factor,lr_chisq,lr_df,lr_p\n";
                for (const auto& row : rows) {
                    if (!row.ok) {
                        out << row.variable << ",ERROR,,,,,,,\n";
                        continue;
                    }
                    for (const auto& c : row.coefficients) {
                        out << row.variable << ',' << c.name << ',' << c.beta << ',' << c.se
                            << ',' << c.p << ',' << c.accel_factor << ','
                            << row.lr_chi_square << ',' << row.lr_df << ',' << row.lr_p
                            << '\n';
                    }
                }
            });
            return;
        case Format::TableFmt:
            break;
    }

    options.io.with_output([&](std::ostream& out) {
        Table table;
        table.title = distribution_name(dist) + " simple regressions (one fit per variable)";
        table.header = {"Covariable", "beta", "se", "p-value", "accel", "LR p"};
        for (const auto& row : rows) {
            if (!row.ok) {
                table.add_row({row.variable, "error: " + row.error, "", "", "", ""});
                continue;
            }
            const bool multi = row.coefficients.size() > 1;
            if (multi) {
                table.add_row({row.variable, "", "", "", "", fmt_p(row.lr_p)});
                for (const auto& c : row.coefficients) {
                    std::string display = c.name;
                    const std::size_t eq = display.find('=');
                    if (eq != std::string::npos) display = "  " + display.substr(eq + 1);
                    table.add_row({display, fmt6(c.beta), fmt6(c.se), fmt_p(c.p),
                                   fmt6(c.accel_factor), ""});
                }
            } else {
                const auto& c = row.coefficients[0];
                table.add_row({row.variable, fmt6(c.beta), fmt6(c.se), fmt_p(c.p),
                               fmt6(c.accel_factor), fmt_p(row.lr_p)});
            }
        }
        table.print(out);
    });
}

// ------------------------------------------------------------------ compare

struct CompareOptions {
    IoOptions io;
    std::string vars;
    std::string dists = "exponential,weibull,lognormal,rayleigh,loglogistic";
};

void run_compare(const CompareOptions& options) {
    std::vector<AftDistribution> dists;
    for (const auto& name : split_list(options.dists)) {
        dists.push_back(parse_distribution(name));
    }
    if (dists.empty()) throw UsageError("--dists needs at least one distribution");
    const std::vector<std::string> variables = split_list(options.vars);
    if (variables.empty()) throw UsageError("--vars needs at least one variable");

    const Cohort cohort = options.io.load();
    std::vector<AftFit> fits;
    fits.reserve(dists.size());
    for (const auto dist : dists) fits.push_back(aft_fit(cohort, variables, dist));
    const auto rows = compare_aic(fits);

    switch (options.io.parsed_format()) {
        case Format::JsonFmt:
            options.io.emit_json(to_json(rows));
            return;
        case Format::CsvFmt:
            options.io.with_output([&rows](std::ostream& out) {
                out << "distribution,loglik,k,aic,delta_aic\n";
                for (const auto& row : rows) {
                    out << distribution_name(row.distribution) << ',' << row.loglik << ','
                        << row.k << ',' << row.aic << ',' << row.delta_aic << '\n';
                }
            });
            return;
        case Format::TableFmt:
            break;
    }

    options.io.with_output([&rows](std::ostream& out) {
        Table table;
        table.title = "AIC values under different survival distributions";
        table.header = {"Parametric survival model", "loglik", "k", "AIC", "dAIC"};
        for (const auto& row : rows) {
            table.add_row({distribution_name(row.distribution), fmt6(row.loglik),
                           std::to_string(row.k), fmt6(row.aic), fmt6(row.delta_aic)});
        }
        table.print(out);
    });
}

// -------------------------------------------------------------------- group

struct GroupOptions {
    IoOptions io;
    std::string by;
    std::string weight = "peto";
    double rho = 0.0;
    double gamma = 0.0;
    double alpha = 0.05;
    std::size_t max_groups = 0;
};

void run_group(const GroupOptions& options) {
    const WeightSpec weight = WeightSpec::parse(options.weight, options.rho, options.gamma);
    const Cohort cohort = options.io.load();
    const GroupAssignment assignment =
        group_curves(cohort, options.by, weight, options.alpha, options.max_groups);

    switch (options.io.parsed_format()) {
        case Format::JsonFmt:
            options.io.emit_json(to_json(assignment));
            return;
        case Format::CsvFmt:
            options.io.with_output(
                [&assignment](std::ostream& out) { write_group_csv(out, assignment); });
            return;
        case Format::TableFmt:
            break;
    }

    options.io.with_output([&](std::ostream& out) {
        Table table;
        table.title = "Survival curve groups for " + options.by + " (" +
                      weight_display(weight) + ", alpha = " + fmt6(options.alpha) + ")";
        table.header = {"Group", "Levels", "within p", "adjusted p"};
        for (const auto& group : assignment.groups) {
            std::string levels;
            for (std::size_t i = 0; i < group.levels.size(); ++i) {
                levels += (i == 0 ? "" : ", ") + group.levels[i];
            }
            table.add_row({std::to_string(group.index), levels, fmt_p(group.within_p),
                           fmt_p(group.adjusted_p)});
        }
        table.print(out);
        out << "G = " << assignment.n_groups << ", homogeneous: "
            << (assignment.homogeneous ? "yes" : "no") << '\n';
    });
}

// ----------------------------------------------------------------- simulate

struct SimulateOptions {
    IoOptions io;
    std::string preset;
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t n_override = 0;
    std::string out_path;
    std::string dump_config;
};

void run_simulate(const SimulateOptions& options) {
    SimConfig config;
    bool have_seed = options.seed_given;
    if (!options.preset.empty() && !options.config_path.empty()) {
        throw UsageError("give either --preset or --config, not both");
    }
    if (!options.preset.empty()) {
        if (options.preset != "paper") {
            throw UsageError("unknown preset '" + options.preset + "' (available: paper)");
        }
        config = paper_preset();
    } else if (!options.config_path.empty()) {
        std::ifstream file(options.config_path);
        if (!file) throw DataError("cannot open '" + options.config_path + "'");
        config = parse_config(file);
        if (config.seed != 0) have_seed = true;
    } else {
        throw UsageError("simulate needs --preset or --config");
    }
    if (options.seed_given) config.seed = options.seed;
    if (!have_seed) {
        throw UsageError("simulate requires an explicit --seed (no wall-clock seeding)");
    }
    if (options.n_override > 0) config.n = options.n_override;

    if (!options.dump_config.empty()) {
        std::ofstream file(options.dump_config);
        if (!file) throw DataError("cannot open '" + options.dump_config + "' for writing");
        write_config(file, config);
    }

    const Cohort cohort = simulate_cohort(config);

    if (options.out_path.empty()) {
        options.io.with_output([&cohort](std::ostream& out) { write_csv(out, cohort); });
        return;
    }
    std::ofstream file(options.out_path);
    if (!file) throw DataError("cannot open '" + options.out_path + "' for writing");
    write_csv(file, cohort);

    const double censored_percent = 100.0 *
                                    static_cast<double>(cohort.censored_count()) /
                                    static_cast<double>(cohort.size());
    switch (options.io.parsed_format()) {
        case Format::JsonFmt:
            options.io.emit_json(json{{"n", cohort.size()},
                                      {"seed", config.seed},
                                      {"events", cohort.event_count()},
                                      {"censored", cohort.censored_count()},
                                      {"censored_percent", censored_percent},
                                      {"output", options.out_path}});
            return;
        case Format::CsvFmt:
        case Format::TableFmt:
            options.io.with_output([&](std::ostream& out) {
                out << "wrote " << cohort.size() << " records to " << options.out_path
                    << " (" << cohort.event_count() << " events, "
                    << cohort.censored_count() << " censored, " << fmt6(censored_percent)
                    << "%)\n";
            });
            return;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netsurv - survival analysis of right-censored lifetimes"};
    app.require_subcommand(1);

    std::function<void()> action;

    auto summarize_options = std::make_shared<IoOptions>();
    {
        CLI::App* cmd =
            app.add_subcommand("summarize", "level counts and scale-variable moments");
        add_io(cmd, *summarize_options);
        cmd->callback([summarize_options, &action] {
            action = [summarize_options] { run_summarize(*summarize_options); };
        });
    }

    auto km_options = std::make_shared<KmOptions>();
    {
        CLI::App* cmd = app.add_subcommand("km", "Kaplan-Meier survival curves");
        add_io(cmd, km_options->io);
        cmd->add_option("--by", km_options->by, "stratify by this categorical covariate");
        cmd->add_option("--at", km_options->at,
                        "report survival at these comma-separated times");
        cmd->add_option("--conf", km_options->conf, "confidence style: loglog or plain")
            ->check(CLI::IsMember({"loglog", "plain"}));
        cmd->add_option("--plot-data", km_options->plot_data,
                        "write the step-function CSV here");
        cmd->callback(
            [km_options, &action] { action = [km_options] { run_km(*km_options); }; });
    }

    auto test_options = std::make_shared<TestOptions>();
    {
        CLI::App* cmd = app.add_subcommand("test", "k-sample weighted log-rank tests");
        add_io(cmd, test_options->io);
        cmd->add_option("--by", test_options->by, "categorical covariates (comma-separated)")
            ->required();
        cmd->add_option("--weight", test_options->weight,
                        "weights: logrank, gehan, peto, fh (comma-separated)");
        cmd->add_option("--rho", test_options->rho, "Fleming-Harrington rho");
        cmd->add_option("--gamma", test_options->gamma, "Fleming-Harrington gamma");
        cmd->callback(
            [test_options, &action] { action = [test_options] { run_test(*test_options); }; });
    }

    auto pairwise_options = std::make_shared<PairwiseOptions>();
    {
        CLI::App* cmd =
            app.add_subcommand("pairwise", "BH-adjusted pairwise curve comparisons");
        add_io(cmd, pairwise_options->io);
        cmd->add_option("--by", pairwise_options->by, "categorical covariate")->required();
        cmd->add_option("--weight", pairwise_options->weight, "test weight");
        cmd->add_option("--rho", pairwise_options->rho, "Fleming-Harrington rho");
        cmd->add_option("--gamma", pairwise_options->gamma, "Fleming-Harrington gamma");
        cmd->add_flag("--raw", pairwise_options->raw, "show raw p-values in table/csv");
        cmd->callback([pairwise_options, &action] {
            action = [pairwise_options] { run_pairwise(*pairwise_options); };
        });
    }

    auto phtest_options = std::make_shared<PhTestOptions>();
    {
        CLI::App* cmd =
            app.add_subcommand("phtest", "Grambsch-Therneau proportional-hazards test");
        add_io(cmd, phtest_options->io);
        cmd->add_option("--vars", phtest_options->vars, "model covariates (comma-separated)")
            ->required();
        cmd->add_option("--transform", phtest_options->transform,
                        "time transform: km, identity, rank, log")
            ->check(CLI::IsMember({"km", "identity", "rank", "log"}));
        cmd->add_option("--ties", phtest_options->ties, "ties method: efron or breslow")
            ->check(CLI::IsMember({"efron", "breslow"}));
        cmd->callback([phtest_options, &action] {
            action = [phtest_options] { run_phtest(*phtest_options); };
        });
    }

    auto aft_options = std::make_shared<AftCliOptions>();
    {
        CLI::App* cmd = app.add_subcommand("aft", "accelerated failure time regression");
        add_io(cmd, aft_options->io);
        cmd->add_option("--vars", aft_options->vars, "covariates (comma-separated)")
            ->required();
        cmd->add_option("--dist", aft_options->dist,
                        "exponential, weibull, rayleigh, lognormal, loglogistic");
        cmd->add_flag("--univariable", aft_options->univariable,
                      "one single-covariate fit per variable");
        cmd->callback(
            [aft_options, &action] { action = [aft_options] { run_aft(*aft_options); }; });
    }

    auto compare_options = std::make_shared<CompareOptions>();
    {
        CLI::App* cmd = app.add_subcommand("compare", "AIC across AFT distributions");
        add_io(cmd, compare_options->io);
        cmd->add_option("--vars", compare_options->vars, "covariates (comma-separated)")
            ->required();
        cmd->add_option("--dists", compare_options->dists,
                        "distributions to fit (comma-separated)");
        cmd->callback([compare_options, &action] {
            action = [compare_options] { run_compare(*compare_options); };
        });
    }

    auto group_options = std::make_shared<GroupOptions>();
    {
        CLI::App* cmd = app.add_subcommand("group", "partition survival curves into groups");
        add_io(cmd, group_options->io);
        cmd->add_option("--by", group_options->by, "categorical covariate")->required();
        cmd->add_option("--weight", group_options->weight, "test weight");
        cmd->add_option("--rho", group_options->rho, "Fleming-Harrington rho");
        cmd->add_option("--gamma", group_options->gamma, "Fleming-Harrington gamma");
        cmd->add_option("--alpha", group_options->alpha, "significance level");
        cmd->add_option("--max-groups", group_options->max_groups,
                        "largest number of groups to consider (0 = #levels)");
        cmd->callback([group_options, &action] {
            action = [group_options] { run_group(*group_options); };
        });
    }

    auto simulate_options = std::make_shared<SimulateOptions>();
    {
        CLI::App* cmd = app.add_subcommand("simulate", "generate a synthetic cohort");
        add_io(cmd, simulate_options->io, /*needs_input=*/false);
        cmd->add_option("--preset", simulate_options->preset, "named preset: paper");
        cmd->add_option("--config", simulate_options->config_path, "simulation config file");
        auto* seed = cmd->add_option("--seed", simulate_options->seed,
                                     "RNG seed (required; no wall-clock seeding)");
        cmd->add_option("--n", simulate_options->n_override, "override the record count");
        cmd->add_option("--out", simulate_options->out_path, "write the cohort CSV here");
        cmd->add_option("--dump-config", simulate_options->dump_config,
                        "write the effective config here");
        cmd->callback([simulate_options, seed, &action] {
            simulate_options->seed_given = seed->count() > 0;
            action = [simulate_options] { run_simulate(*simulate_options); };
        });
    }

    try {
        app.parse(argc, argv);
        if (action) action();
        return 0;
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
