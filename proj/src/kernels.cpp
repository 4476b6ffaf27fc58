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

#include "netsurv/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "kernels_detail.hpp"
#include "netsurv/errors.hpp"

namespace netsurv::kernels {

namespace {

double scalar_sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double scalar_dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double scalar_weighted_dot(const double* w, const double* a, const double* b,
                           std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
    return acc;
}

void scalar_vexp(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void scalar_vlog(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

void scalar_axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scalar_sub_scale(const double* a, const double* b, double inv_scale, double* out,
                      std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] - b[i]) * inv_scale;
}

std::atomic<const detail::KernelTable*> g_active{nullptr};
std::atomic<Backend> g_active_kind{Backend::Scalar};

const detail::KernelTable* resolve(Backend backend) {
    switch (backend) {
        case Backend::Scalar:
            g_active_kind.store(Backend::Scalar);
            return &detail::scalar_table();
        case Backend::Avx2: {
            const detail::KernelTable* t = detail::avx2_table();
            if (t == nullptr) {
                throw UsageError("AVX2 kernels are not available on this CPU/build");
            }
            g_active_kind.store(Backend::Avx2);
            return t;
        }
        case Backend::Auto:
        default: {
            const detail::KernelTable* t = detail::avx2_table();
            if (t != nullptr) {
                g_active_kind.store(Backend::Avx2);
                return t;
            }
            g_active_kind.store(Backend::Scalar);
            return &detail::scalar_table();
        }
    }
}

const detail::KernelTable& table() {
    const detail::KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = resolve(Backend::Auto);
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

namespace detail {

const KernelTable& scalar_table() {
    static const KernelTable t{scalar_sum,  scalar_dot,  scalar_weighted_dot, scalar_vexp,
                               scalar_vlog, scalar_axpy, scalar_sub_scale};
    return t;
}

}  // namespace detail

void set_backend(Backend backend) {
    g_active.store(resolve(backend), std::memory_order_release);
}

Backend active_backend() {
    table();
    return g_active_kind.load();
}

bool avx2_supported() { return detail::avx2_table() != nullptr; }

double sum(std::span<const double> x) { return table().sum(x.data(), x.size()); }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    return table().dot(a.data(), b.data(), a.size());
}

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
    if (w.size() != a.size() || w.size() != b.size()) {
        throw std::invalid_argument("weighted_dot: size mismatch");
    }
    return table().weighted_dot(w.data(), a.data(), b.data(), w.size());
}

void vexp(std::span<const double> x, std::span<double> out) {
    if (x.size() != out.size()) throw std::invalid_argument("vexp: size mismatch");
    table().vexp(x.data(), out.data(), x.size());
}

void vlog(std::span<const double> x, std::span<double> out) {
    if (x.size() != out.size()) throw std::invalid_argument("vlog: size mismatch");
    table().vlog(x.data(), out.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    table().axpy(alpha, x.data(), y.data(), x.size());
}

void sub_scale(std::span<const double> a, std::span<const double> b, double inv_scale,
               std::span<double> out) {
    if (a.size() != b.size() || a.size() != out.size()) {
        throw std::invalid_argument("sub_scale: size mismatch");
    }
    table().sub_scale(a.data(), b.data(), inv_scale, out.data(), a.size());
}

}  // namespace netsurv::kernels
