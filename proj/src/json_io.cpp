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

#include "netsurv/json_io.hpp"

#include <cmath>

#include "netsurv/special.hpp"

namespace netsurv {

using nlohmann::json;

namespace {

// JSON has no infinities; the far-tail p-values underflow to 0 anyway,
// but guard the odd non-finite diagnostic value.
json number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

}  // namespace

json to_json(const SummaryReport& report) {
    json categorical = json::array();
    for (const auto& c : report.categorical) {
        json levels = json::array();
        for (const auto& l : c.levels) {
            levels.push_back({{"level", l.level},
                              {"n", l.count},
                              {"percent", number(l.percent)},
                              {"censored", l.censored},
                              {"censored_percent", number(l.censored_percent)}});
        }
        categorical.push_back({{"name", c.name}, {"levels", levels}});
    }
    json continuous = json::array();
    for (const auto& c : report.continuous) {
        continuous.push_back({{"name", c.name},
                              {"mean", number(c.mean)},
                              {"sd", number(c.sd)},
                              {"has_variance", c.has_variance}});
    }
    return json{{"n", report.n},
                {"events", report.events},
                {"censored", report.censored},
                {"censored_percent", number(report.censored_percent)},
                {"duration", {{"mean", number(report.duration.mean)},
                              {"sd", number(report.duration.sd)}}},
                {"categorical", categorical},
                {"continuous", continuous}};
}

json to_json(const SurvivalCurve& curve) {
    json steps = json::array();
    for (const auto& s : curve.steps) {
        steps.push_back({{"time", number(s.time)},
                         {"n_risk", s.n_risk},
                         {"n_event", s.n_event},
                         {"n_censor", s.n_censor},
                         {"survival", number(s.survival)},
                         {"std_err", number(s.std_err)},
                         {"ci_low", number(s.ci_low)},
                         {"ci_high", number(s.ci_high)}});
    }
    const auto median = curve.median();
    return json{{"n", curve.n},
                {"events", curve.events},
                {"max_observed_time", number(curve.max_observed_time)},
                {"median", median ? json(number(*median)) : json(nullptr)},
                {"steps", steps}};
}

json to_json(const RankTestResult& result) {
    json groups = json::array();
    for (const auto& g : result.groups) {
        groups.push_back({{"level", g.level},
                          {"n", g.n},
                          {"observed", g.observed},
                          {"expected", number(g.expected)}});
    }
    return json{{"statistic", number(result.chi_square)},
                {"df", result.df},
                {"p", number(result.p_value)},
                {"weight", result.weight.label()},
                {"groups", groups}};
}

json to_json(const PairwiseMatrix& matrix) {
    const std::size_t k = matrix.levels.size();
    auto matrix_of = [&](const std::vector<double>& values) {
        json rows = json::array();
        for (std::size_t i = 0; i < k; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < k; ++j) {
                if (i == j) {
                    row.push_back(nullptr);
                } else {
                    row.push_back(number(values[matrix.pair_index(i, j)]));
                }
            }
            rows.push_back(row);
        }
        return rows;
    };
    return json{{"levels", matrix.levels},
                {"raw", matrix_of(matrix.raw)},
                {"adjusted", matrix_of(matrix.adjusted)},
                {"weight", matrix.weight.label()},
                {"comparisons", matrix.comparisons()}};
}

json to_json(const CoxFit& fit) {
    json coefficients = json::array();
    for (std::size_t j = 0; j < fit.column_names.size(); ++j) {
        coefficients.push_back({{"name", fit.column_names[j]},
                                {"beta", number(fit.beta(static_cast<Eigen::Index>(j)))},
                                {"se", number(fit.std_error(j))},
                                {"z", number(fit.z_statistic(j))},
                                {"p", number(fit.p_value(j))}});
    }
    return json{{"coefficients", coefficients},
                {"loglik", number(fit.loglik)},
                {"loglik0", number(fit.loglik0)},
                {"ties", ties_name(fit.ties)},
                {"n", fit.n},
                {"events", fit.events},
                {"iterations", fit.iterations}};
}

json to_json(const PhTestResult& result) {
    json columns = json::array();
    for (const auto& c : result.columns) {
        columns.push_back({{"name", c.name},
                           {"chisq", number(c.chi_square)},
                           {"df", 1},
                           {"p", number(c.p_value)}});
    }
    return json{{"columns", columns},
                {"global", {{"chisq", number(result.global_chi_square)},
                            {"df", result.global_df},
                            {"p", number(result.global_p)}}},
                {"transform", transform_name(result.transform)}};
}

json to_json(const AftFit& fit) {
    json coefficients = json::array();
    coefficients.push_back({{"name", "(intercept)"},
                            {"beta", number(fit.intercept)},
                            {"se", number(fit.intercept_se)},
                            {"p", number(special::wald_p_value(
                                       fit.intercept / fit.intercept_se))},
                            {"accel_factor", nullptr}});
    for (std::size_t j = 0; j < fit.column_names.size(); ++j) {
        const double beta = fit.beta(static_cast<Eigen::Index>(j));
        coefficients.push_back({{"name", fit.column_names[j]},
                                {"beta", number(beta)},
                                {"se", number(fit.beta_se(static_cast<Eigen::Index>(j)))},
                                {"p", number(fit.p_value(j))},
                                {"accel_factor", number(std::exp(beta))}});
    }
    return json{{"distribution", distribution_name(fit.distribution)},
                {"coefficients", coefficients},
                {"scale", {{"value", number(fit.scale)}, {"fixed", fit.scale_fixed}}},
                {"loglik", number(fit.loglik)},
                {"aic", number(fit.aic)},
                {"n", fit.n},
                {"events", fit.events}};
}

json to_json(const std::vector<AicRow>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back({{"distribution", distribution_name(row.distribution)},
                       {"loglik", number(row.loglik)},
                       {"k", row.k},
                       {"aic", number(row.aic)},
                       {"delta_aic", number(row.delta_aic)}});
    }
    return json{{"rows", out}};
}

json to_json(const std::vector<ScreenRow>& rows, AftDistribution dist) {
    json out = json::array();
    for (const auto& row : rows) {
        json entry{{"variable", row.variable}, {"ok", row.ok}};
        if (!row.ok) {
            entry["error"] = row.error;
        } else {
            json coefficients = json::array();
            for (const auto& c : row.coefficients) {
                coefficients.push_back({{"name", c.name},
                                        {"beta", number(c.beta)},
                                        {"se", number(c.se)},
                                        {"p", number(c.p)},
                                        {"accel_factor", number(c.accel_factor)}});
            }
            entry["coefficients"] = coefficients;
            entry["lr"] = {{"chisq", number(row.lr_chi_square)},
                           {"df", row.lr_df},
                           {"p", number(row.lr_p)}};
        }
        out.push_back(std::move(entry));
    }
    return json{{"distribution", distribution_name(dist)}, {"rows", out}};
}

json to_json(const GroupAssignment& assignment) {
    json groups = json::array();
    for (const auto& group : assignment.groups) {
        groups.push_back({{"index", group.index},
                          {"levels", group.levels},
                          {"within_p", number(group.within_p)},
                          {"adjusted_p", number(group.adjusted_p)},
                          {"mean_rmst", number(group.mean_rmst)}});
    }
    return json{{"G", assignment.n_groups},
                {"groups", groups},
                {"homogeneous", assignment.homogeneous},
                {"weight", assignment.weight.label()},
                {"alpha", assignment.alpha}};
}

}  // namespace netsurv
