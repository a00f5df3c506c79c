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
#ifndef DIRSEG_BENCH_HPP
#define DIRSEG_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dirseg {

inline constexpr double kMatchTolerance = 1e-5;

struct BenchConfig {
    std::size_t channels = 512;
    std::size_t height = 30;
    std::size_t width = 54;
    std::size_t repetitions = 3;
    std::uint64_t seed = 7;
    /// When > 1 the contraction path is also timed with this many workers.
    unsigned threads = 1;
};

struct BenchPath {
    std::string name;
    std::vector<double> seconds;
    double median = 0.0;
};

struct BenchReport {
    BenchConfig config;
    BenchPath contraction;
    BenchPath naive;
    std::vector<BenchPath> parallel;
    double max_abs_diff = 0.0;
    double speedup = 0.0;
};

/// Times the kernel-bank contraction and the pairwise loop on the same random
/// inputs. Every repetition's outputs are compared; any difference above
/// kMatchTolerance throws Error and no report is produced.
BenchReport bench_matching(const BenchConfig& config);

std::string format_report(const BenchReport& report);

}  // namespace dirseg

#endif  // DIRSEG_BENCH_HPP
