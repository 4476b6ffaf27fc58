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

#include "netsurv/rng.hpp"

#include <cmath>

namespace netsurv::rng {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.283185307179586476925287;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

Substream::Substream(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + kGamma) ^ mix64(stream * kGamma + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t Substream::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double Substream::uniform() {
    // 53 random bits, centred so the result is strictly inside (0, 1)
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Substream::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Substream::exponential() { return -std::log(uniform()); }

double Substream::logistic() {
    const double u = uniform();
    return std::log(u / (1.0 - u));
}

double Substream::extreme_value() { return std::log(-std::log(uniform())); }

}  // namespace netsurv::rng
