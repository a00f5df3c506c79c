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
#ifndef DIRSEG_SYNTHETIC_HPP
#define DIRSEG_SYNTHETIC_HPP

#include "dirseg/appearance.hpp"
#include "dirseg/directional.hpp"
#include "dirseg/fusion.hpp"
#include "dirseg/io.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dirseg {

/// A square moving over a vMF background. Frame t (0..frames) places the
/// square's top-left corner at start + t * velocity, reflected off the grid
/// walls when `bounce` is set.
struct SyntheticSequenceSpec {
    GridShape grid{16, 16};
    std::size_t channels = 16;
    /// Frames after the first, so a sequence holds frames + 1 maps.
    std::size_t frames = 20;
    std::size_t side = 8;
    long start_row = 2;
    long start_col = 1;
    long velocity_row = 1;
    long velocity_col = 1;
    bool bounce = true;
    double separation_degrees = 60.0;
    double kappa = 30.0;
    std::uint64_t seed = 1;

    /// Keys: height, width, channels, frames, side, start_row, start_col,
    /// velocity_row, velocity_col, bounce, separation_degrees, kappa_gen, seed.
    /// Missing keys keep their defaults.
    static SyntheticSequenceSpec from_config(const Config& config);
};

struct SyntheticSequence {
    std::vector<DirectionalFeatureMap> features;
    std::vector<BinaryMask> truth;
    std::vector<double> mu_foreground;
    std::vector<double> mu_background;
    double separation_degrees = 0.0;
};

/// Top-left corner (row, col) of the square at frame t. Throws
/// Error("shape leaves grid") when it does not fit.
std::pair<std::size_t, std::size_t> square_corner(const SyntheticSequenceSpec& spec, std::size_t t);

SyntheticSequence generate_synthetic_sequence(const SyntheticSequenceSpec& spec);

struct HeadTrainingOptions {
    std::size_t sequences = 8;
    FitOptions fit;
    AppearanceConfig appearance;
};

/// Fits a fusion head on `sequences` generated sequences (seeds spec.seed,
/// spec.seed + 1, ...). A first head is fit on cues collected with the
/// ground truth recycled between frames; the returned head is refit on cues
/// from running that head closed-loop, pooled with the first set. Pixels of
/// frames 1..T are the training targets.
FusionFit train_head_on_synthetic(const SyntheticSequenceSpec& spec, const HeadTrainingOptions& options);

}  // namespace dirseg

#endif  // DIRSEG_SYNTHETIC_HPP
