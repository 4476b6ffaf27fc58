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

// This translation unit is the only one compiled with -mavx2 -mfma.
// Everything here is reached through the dispatch table, never directly.

#include "kernels_detail.hpp"

#include <cmath>
#include <cstdint>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace netsurv::kernels::detail {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

#if defined(__AVX2__) && defined(__FMA__)

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double avx2_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

double avx2_dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

double avx2_weighted_dot(const double* w, const double* a, const double* b,
                         std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
        acc = _mm256_fmadd_pd(wa, _mm256_loadu_pd(b + i), acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += w[i] * a[i] * b[i];
    return total;
}

void avx2_axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d valpha = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d acc =
            _mm256_fmadd_pd(valpha, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, acc);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void avx2_sub_scale(const double* a, const double* b, double inv_scale, double* out,
                    std::size_t n) {
    const __m256d vscale = _mm256_set1_pd(inv_scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(v, vscale));
    }
    for (; i < n; ++i) out[i] = (a[i] - b[i]) * inv_scale;
}

// exp by range reduction x = n*ln2 + r, |r| <= ln2/2, then a degree-13
// Taylor polynomial in r.  Truncation error ~4e-18 relative, well under
// the rounding noise of the reduction itself.  Saturates outside
// [-708, 709] (subnormal results flush to 0).
constexpr double kExpHi = 709.0;
constexpr double kExpLo = -708.0;
constexpr double kLog2E = 1.4426950408889634073599;
constexpr double kLn2Hi = 6.93147180369123816490e-1;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

inline __m256d exp_poly(__m256d r) {
    const __m256d c13 = _mm256_set1_pd(1.0 / 6227020800.0);
    const __m256d c12 = _mm256_set1_pd(1.0 / 479001600.0);
    const __m256d c11 = _mm256_set1_pd(1.0 / 39916800.0);
    const __m256d c10 = _mm256_set1_pd(1.0 / 3628800.0);
    const __m256d c9 = _mm256_set1_pd(1.0 / 362880.0);
    const __m256d c8 = _mm256_set1_pd(1.0 / 40320.0);
    const __m256d c7 = _mm256_set1_pd(1.0 / 5040.0);
    const __m256d c6 = _mm256_set1_pd(1.0 / 720.0);
    const __m256d c5 = _mm256_set1_pd(1.0 / 120.0);
    const __m256d c4 = _mm256_set1_pd(1.0 / 24.0);
    const __m256d c3 = _mm256_set1_pd(1.0 / 6.0);
    const __m256d c2 = _mm256_set1_pd(0.5);
    const __m256d c1 = _mm256_set1_pd(1.0);
    __m256d p = c13;
    p = _mm256_fmadd_pd(p, r, c12);
    p = _mm256_fmadd_pd(p, r, c11);
    p = _mm256_fmadd_pd(p, r, c10);
    p = _mm256_fmadd_pd(p, r, c9);
    p = _mm256_fmadd_pd(p, r, c8);
    p = _mm256_fmadd_pd(p, r, c7);
    p = _mm256_fmadd_pd(p, r, c6);
    p = _mm256_fmadd_pd(p, r, c5);
    p = _mm256_fmadd_pd(p, r, c4);
    p = _mm256_fmadd_pd(p, r, c3);
    p = _mm256_fmadd_pd(p, r, c2);
    p = _mm256_fmadd_pd(p, r, c1);
    p = _mm256_fmadd_pd(p, r, c1);
    return p;
}

inline __m256d exp4(__m256d x) {
    const __m256d hi = _mm256_set1_pd(kExpHi);
    const __m256d lo = _mm256_set1_pd(kExpLo);
    const __m256d clamped = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d nd = _mm256_round_pd(_mm256_mul_pd(clamped, _mm256_set1_pd(kLog2E)),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(nd, _mm256_set1_pd(kLn2Hi), clamped);
    r = _mm256_fnmadd_pd(nd, _mm256_set1_pd(kLn2Lo), r);

    __m256d p = exp_poly(r);

    // scale by 2^n via the exponent field; |n| <= 1023 after clamping
    const __m128i n32 = _mm256_cvtpd_epi32(nd);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i biased = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
    const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
    p = _mm256_mul_pd(p, scale);

    // saturate outside the clamped range
    const __m256d inf = _mm256_set1_pd(HUGE_VAL);
    const __m256d zero = _mm256_setzero_pd();
    p = _mm256_blendv_pd(p, inf, _mm256_cmp_pd(x, hi, _CMP_GT_OQ));
    p = _mm256_blendv_pd(p, zero, _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
    return p;
}

void avx2_vexp(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = std::exp(x[i]);
}

// log via x = 2^e * m with m in [sqrt(1/2), sqrt(2)), then
// log m = 2 atanh((m-1)/(m+1)) as an odd series.  Contract requires
// normal positive inputs.
constexpr double kSqrt2 = 1.4142135623730951;

inline __m256d log4(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i exp_field = _mm256_srli_epi64(bits, 52);
    const __m256i exp_masked = _mm256_and_si256(exp_field, _mm256_set1_epi64x(0x7ff));

    // int64 -> double for values < 2^31 via the 2^52 bias trick
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(exp_masked, magic)),
                              _mm256_castsi256_pd(magic));
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

    const __m256d too_big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GE_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), too_big);
    e = _mm256_add_pd(e, _mm256_and_pd(too_big, _mm256_set1_pd(1.0)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d w = _mm256_mul_pd(s, s);

    __m256d p = _mm256_set1_pd(1.0 / 19.0);
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 17.0));
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 15.0));
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 13.0));
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 11.0));
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 9.0));
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 7.0));
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 5.0));
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 3.0));
    p = _mm256_fmadd_pd(p, w, one);
    const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), p);

    __m256d result = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), log_m);
    result = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), result);
    return result;
}

void avx2_vlog(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, log4(_mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = std::log(x[i]);
}

}  // namespace

const KernelTable* avx2_table() {
    static const bool ok = cpu_has_avx2();
    if (!ok) return nullptr;
    static const KernelTable t{avx2_sum,  avx2_dot,  avx2_weighted_dot, avx2_vexp,
                               avx2_vlog, avx2_axpy, avx2_sub_scale};
    return &t;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif  // __AVX2__ && __FMA__

}  // namespace netsurv::kernels::detail
