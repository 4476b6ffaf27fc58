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

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace netsurv::cli {

/// 6 significant digits, the fixed table-format precision.
inline std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// p-value display: values below 2e-16 print as "<2e-16" (table output
/// only; JSON always carries the exact number).
inline std::string fmt_p(double p) {
    if (p < 2e-16) return "<2e-16";
    return fmt6(p);
}

inline std::string fmt_count_pct(std::size_t count, double pct) {
    return std::to_string(count) + " (" + fmt6(pct) + ")";
}

/// Minimal aligned-table printer: first column left-aligned, the rest
/// right-aligned.  Empty header cells are allowed.
struct Table {
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    void print(std::ostream& out) const {
        if (!title.empty()) out << title << '\n';
        std::vector<std::size_t> widths(header.size(), 0);
        auto update = [&widths](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i >= widths.size()) widths.resize(i + 1, 0);
                widths[i] = std::max(widths[i], row[i].size());
            }
        };
        update(header);
        for (const auto& row : rows) update(row);

        auto print_row = [&](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < widths.size(); ++i) {
                const std::string cell = i < row.size() ? row[i] : "";
                if (i == 0) {
                    out << cell << std::string(widths[i] - cell.size(), ' ');
                } else {
                    out << "  " << std::string(widths[i] - cell.size(), ' ') << cell;
                }
            }
            out << '\n';
        };
        if (!header.empty()) {
            print_row(header);
            std::size_t total = 0;
            for (const std::size_t w : widths) total += w + 2;
            out << std::string(total >= 2 ? total - 2 : total, '-') << '\n';
        }
        for (const auto& row : rows) print_row(row);
    }
};

}  // namespace netsurv::cli
