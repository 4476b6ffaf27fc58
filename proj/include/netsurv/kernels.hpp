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
#include <span>

namespace netsurv::kernels {

/// Vectorized inner loops behind the likelihood evaluations.  Scalar
/// reference implementations always exist; an AVX2 variant is compiled
/// into its own translation unit and selected at runtime when the CPU
/// supports it.  Backends agree to rounding-level differences only and
/// are equivalence-tested against each other.
enum class Backend {
    Auto,    ///< pick the widest supported ISA (default)
    Scalar,  ///< force the reference implementation
    Avx2,    ///< force AVX2 (throws UsageError if unsupported)
};

/// Select the backend globally.  Intended for tests and benchmarking.
void set_backend(Backend backend);

/// The backend currently dispatched to (never Auto).
Backend active_backend();

/// True if this build and CPU can run the AVX2 variants.
bool avx2_supported();

/// Sum of all elements.
double sum(std::span<const double> x);

/// Dot product; sizes must match.
double dot(std::span<const double> a, std::span<const double> b);

/// Triple product reduction: sum_i w[i] * a[i] * b[i].
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);

/// out[i] = exp(x[i]).  Inputs outside [-709, 709] saturate to 0 / +inf.
void vexp(std::span<const double> x, std::span<double> out);

/// out[i] = log(x[i]).  Requires strictly positive inputs.
void vlog(std::span<const double> x, std::span<double> out);

/// y[i] += alpha * x[i].
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// out[i] = (a[i] - b[i]) * inv_scale.
void sub_scale(std::span<const double> a, std::span<const double> b, double inv_scale,
               std::span<double> out);

}  // namespace netsurv::kernels
