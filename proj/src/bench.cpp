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
#include "dirseg/bench.hpp"

#include "dirseg/matching.hpp"
#include "dirseg/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

namespace dirseg {

namespace {

DirectionalFeatureMap random_features(std::size_t channels, GridShape shape, Rng& rng)
{
    RawFeatureMap raw(channels, shape);
    for (double& v : raw.values())
        v = rng.normal();
    return l2_normalize(raw);
}

double max_diff(const MatchCues& a, const MatchCues& b)
{
    double d = 0.0;
    for (std::size_t l = 0; l < a.target.size(); ++l) {
        d = std::max(d, std::abs(a.target[l] - b.target[l]));
        d = std::max(d, std::abs(a.background[l] - b.background[l]));
    }
    return d;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

MatchCues timed(const std::function<MatchCues()>& fn, BenchPath& path)
{
    const auto start = std::chrono::steady_clock::now();
    MatchCues out = fn();
    const auto stop = std::chrono::steady_clock::now();
    path.seconds.push_back(std::chrono::duration<double>(stop - start).count());
    return out;
}

}  // namespace

BenchReport bench_matching(const BenchConfig& config)
{
    if (config.channels == 0 || config.height == 0 || config.width == 0 || config.repetitions == 0)
        throw Error("bench parameters must be at least 1");

    Rng rng(config.seed);
    const GridShape shape{config.height, config.width};
    const DirectionalFeatureMap first = random_features(config.channels, shape, rng);
    const DirectionalFeatureMap frame = random_features(config.channels, shape, rng);
    Grid<double> weights(shape);
    for (double& v : weights.values())
        v = rng.uniform();
    const SoftMask mask(std::move(weights));

    BenchReport report;
    report.config = config;
    report.contraction.name = "contraction";
    report.naive.name = "pairwise loop";
    if (config.threads > 1)
        report.parallel.push_back({"contraction x" + std::to_string(config.threads), {}, 0.0});

    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        // banks are rebuilt inside the timed region: both paths start from (F0, M0, F)
        const MatchCues fast = timed([&] { return global_directional_match(first, mask, frame); }, report.contraction);
        const MatchCues slow = timed([&] { return brute_force_match_oracle(first, mask, frame); }, report.naive);
        report.max_abs_diff = std::max(report.max_abs_diff, max_diff(fast, slow));
        for (auto& path : report.parallel) {
            const MatchCues par = timed(
                [&] { return global_directional_match(first, mask, frame, MatchOptions{config.threads}); }, path);
            report.max_abs_diff = std::max(report.max_abs_diff, max_diff(par, slow));
        }
    }
    if (!(report.max_abs_diff < kMatchTolerance))
        throw Error("matching paths disagree: max abs diff " + std::to_string(report.max_abs_diff));

    report.contraction.median = median(report.contraction.seconds);
    report.naive.median = median(report.naive.seconds);
    for (auto& path : report.parallel)
        path.median = median(path.seconds);
    report.speedup = report.naive.median / report.contraction.median;
    return report;
}

std::string format_report(const BenchReport& report)
{
    const auto& c = report.config;
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "matching benchmark  C=%zu H=%zu W=%zu  kernels=%zu  reps=%zu\n", c.channels,
                  c.height, c.width, c.height * c.width, c.repetitions);
    out += line;
    std::snprintf(line, sizeof line, "outputs agree: max abs diff %.3e (tolerance %.0e)\n", report.max_abs_diff,
                  kMatchTolerance);
    out += line;

    auto row = [&](const BenchPath& p) {
        std::snprintf(line, sizeof line, "%-18s", p.name.c_str());
        out += line;
        for (double s : p.seconds) {
            std::snprintf(line, sizeof line, " %10.4f", s);
            out += line;
        }
        std::snprintf(line, sizeof line, "   median %10.4f s\n", p.median);
        out += line;
    };
    out += "path               samples (s)\n";
    row(report.contraction);
    row(report.naive);
    for (const auto& p : report.parallel)
        row(p);
    std::snprintf(line, sizeof line, "speedup (pairwise / contraction): %.2fx\n", report.speedup);
    out += line;
    for (const auto& p : report.parallel) {
        std::snprintf(line, sizeof line, "speedup (pairwise / %s): %.2fx\n", p.name.c_str(),
                      report.naive.median / p.median);
        out += line;
    }
    out += "note: times cover matching only (no feature extraction), so they are not per-frame runtimes\n";
    return out;
}

}  // namespace dirseg
