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

namespace netsurv::special {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
/// Computed directly by continued fraction for large x, so tail values
/// far below 1e-16 keep full relative accuracy.
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with df degrees of freedom.
/// Returns 1 for x <= 0.
double chi_square_sf(double x, double df);

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal upper tail, accurate into the far tail.
double normal_sf(double z);

/// log of the standard normal upper tail; asymptotic expansion beyond
/// the range where erfc underflows.
double log_normal_sf(double z);

/// Inverse Mills ratio phi(z) / (1 - Phi(z)); hazard of the standard
/// normal.  Stable for large z via asymptotic series.
double normal_hazard(double z);

/// Two-sided normal p-value for a Wald z statistic.
double wald_p_value(double z);

}  // namespace netsurv::special
