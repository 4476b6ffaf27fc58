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

namespace netsurv::kernels::detail {

// One function-pointer table per backend.  The AVX2 translation unit
// fills in avx2_table() when it was compiled with AVX2 support and the
// CPU can run it; otherwise the pointer set is null.
struct KernelTable {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
    void (*vexp)(const double*, double*, std::size_t);
    void (*vlog)(const double*, double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*sub_scale)(const double*, const double*, double, double*, std::size_t);
};

const KernelTable& scalar_table();

// Null when the binary lacks an AVX2 translation unit.
const KernelTable* avx2_table();

// True when the CPU reports AVX2 + FMA.
bool cpu_has_avx2();

}  // namespace netsurv::kernels::detail
