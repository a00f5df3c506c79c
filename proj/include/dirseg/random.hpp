/* Copyright 2026 The dirseg Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef DIRSEG_RANDOM_HPP
#define DIRSEG_RANDOM_HPP

#include <cstdint>
#include <random>

namespace dirseg {

/// Reproducible random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The std:: distributions are implementation-defined, so every
/// transform below is spelled out instead:
///
///   uniform()  = (next() >> 11) * 2^-53, in [0, 1)
///   normal()   = Box-Muller on u1 = 1 - uniform(), u2 = uniform():
///                sqrt(-2 ln u1) * cos(2 pi u2), then the sine branch on the
///                following call
///   gamma(a)   = Marsaglia-Tsang squeeze; for a < 1, gamma(a + 1) * u^(1/a)
///   beta(a, b) = x / (x + y), x = gamma(a), y = gamma(b)
///
/// Test vectors are listed in the README and frozen in tests/test_random.cpp.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();
    double normal();
    double gamma(double shape);
    double beta(double a, double b);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace dirseg

#endif  // DIRSEG_RANDOM_HPP
