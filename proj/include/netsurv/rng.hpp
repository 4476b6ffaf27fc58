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

#include <cstdint>

namespace netsurv::rng {

/// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based generator: output k of stream (seed, stream) is
/// mix64(key + k * gamma), so any draw is a pure function of
/// (seed, stream, k).  Streams never interact, which makes per-record
/// substreams independent of how many records are generated, and the
/// sequence identical across platforms.  Distribution transforms are
/// written out explicitly for the same reason (std:: distributions are
/// implementation-defined).
class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal via Box-Muller (consumes two uniforms).
    double normal();

    /// Standard exponential, -log(u).
    double exponential();

    /// Standard logistic, log(u / (1 - u)).
    double logistic();

    /// Smallest extreme value: S(w) = exp(-e^w), via log(-log(u)).
    double extreme_value();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace netsurv::rng
