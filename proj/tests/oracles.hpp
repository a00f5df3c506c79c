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
// Test-only reference computations. None of these call into the code path
// they are used to check.
#ifndef DIRSEG_TESTS_ORACLES_HPP
#define DIRSEG_TESTS_ORACLES_HPP

#include "dirseg/directional.hpp"
#include "dirseg/fusion.hpp"
#include "dirseg/matching.hpp"
#include "dirseg/random.hpp"
#include "dirseg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dirseg::testing {

inline DirectionalFeatureMap random_directional(std::size_t channels, GridShape shape, Rng& rng)
{
    RawFeatureMap raw(channels, shape);
    for (double& v : raw.values())
        v = rng.normal();
    return l2_normalize(raw);
}

inline SoftMask random_soft_mask(GridShape shape, Rng& rng)
{
    Grid<double> g(shape);
    for (double& v : g.values())
        v = rng.uniform();
    return SoftMask(std::move(g));
}

/// Hard mask with at least one pixel of each class when the grid allows it.
inline SoftMask random_hard_mask(GridShape shape, Rng& rng)
{
    Grid<double> g(shape);
    for (double& v : g.values())
        v = rng.uniform() < 0.5 ? 1.0 : 0.0;
    if (g.size() >= 2) {
        g[0] = 1.0;
        g[g.size() - 1] = 0.0;
    }
    return SoftMask(std::move(g));
}

/// Definitional triple loop: S[k, h, w] = sum_c F(c, h, w) * K(k, c).
inline double direct_similarity(const DirectionalFeatureMap& frame, const KernelBank& bank, std::size_t k,
                                std::size_t h, std::size_t w)
{
    double s = 0.0;
    for (std::size_t c = 0; c < frame.channels(); ++c)
        s += frame.at(c, h, w) * bank.row(k)[c];
    return s;
}

inline double naive_max(const SimilarityVolume& v, std::size_t h, std::size_t w)
{
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < v.kernels(); ++k)
        best = std::max(best, v.at(k, h, w));
    return best;
}

inline double max_abs_diff(const CueMap& a, const CueMap& b)
{
    double d = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l)
        d = std::max(d, std::abs(a[l] - b[l]));
    return d;
}

/// Central finite differences of the cross-entropy in every head parameter.
inline FusionHead finite_difference_gradient(const FusionHead& head, std::span<const LabeledCues> samples,
                                             double step)
{
    FusionHead grad;
    auto eval = [&](const FusionHead& h) { return cross_entropy(h, samples).loss; };
    for (std::size_t c = 0; c <= kCueChannels; ++c) {
        FusionHead plus = head;
        FusionHead minus = head;
        double& p = c < kCueChannels ? plus.weights[c] : plus.bias;
        double& m = c < kCueChannels ? minus.weights[c] : minus.bias;
        p += step;
        m -= step;
        const double g = (eval(plus) - eval(minus)) / (2.0 * step);
        (c < kCueChannels ? grad.weights[c] : grad.bias) = g;
    }
    return grad;
}

/// Labels each pixel by the generating component that is more likely under
/// the true parameters: equal concentrations, so the larger dot product wins.
inline BinaryMask bayes_oracle(const SyntheticSequence& seq, std::size_t t)
{
    const auto& f = seq.features[t];
    BinaryMask out(f.shape(), 0);
    for (std::size_t l = 0; l < f.pixels(); ++l) {
        double d = 0.0;
        for (std::size_t c = 0; c < f.channels(); ++c)
            d += f.values()[c * f.pixels() + l] * (seq.mu_foreground[c] - seq.mu_background[c]);
        out[l] = d > 0.0 ? 1 : 0;
    }
    return out;
}

}  // namespace dirseg::testing

#endif  // DIRSEG_TESTS_ORACLES_HPP
