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
#ifndef DIRSEG_MATCHING_HPP
#define DIRSEG_MATCHING_HPP

#include "dirseg/directional.hpp"
#include "dirseg/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dirseg {

// Global directional matching.
//
// The first frame is compiled into two banks of 1x1 "kernels": one row per
// first-frame pixel, scaled by its target (resp. background) mask weight.
// Matching a new frame is then the contraction
//
//     S[k, h, w] = sum_c F(c, h, w) * K(k, c)
//
// followed by a max over k. Rows with zero weight stay in the bank, so the
// max is floored at 0 whenever the mask has a zero (resp. one) somewhere.

/// HW x C matrix of mask-weighted unit features, row-major.
class KernelBank {
public:
    KernelBank() = default;
    KernelBank(std::size_t rows, std::size_t channels, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t channels() const { return channels_; }
    std::span<const double> row(std::size_t k) const { return {data_.data() + k * channels_, channels_}; }
    std::span<const double> values() const& { return data_; }
    void values() && = delete;

    friend bool operator==(const KernelBank&, const KernelBank&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t channels_ = 0;
    std::vector<double> data_;
};

struct KernelBanks {
    KernelBank target;
    KernelBank background;
};

/// Kernels x H x W similarity values, index (k * H + h) * W + w.
class SimilarityVolume {
public:
    SimilarityVolume(std::size_t kernels, GridShape shape);

    std::size_t kernels() const { return kernels_; }
    GridShape shape() const { return shape_; }
    double& at(std::size_t k, std::size_t h, std::size_t w) { return data_[(k * shape_.height + h) * shape_.width + w]; }
    double at(std::size_t k, std::size_t h, std::size_t w) const { return data_[(k * shape_.height + h) * shape_.width + w]; }
    std::span<double> slice(std::size_t k) { return {data_.data() + k * shape_.size(), shape_.size()}; }
    std::span<const double> slice(std::size_t k) const { return {data_.data() + k * shape_.size(), shape_.size()}; }

private:
    std::size_t kernels_ = 0;
    GridShape shape_;
    std::vector<double> data_;
};

struct MatchCues {
    CueMap target;
    CueMap background;
};

struct MatchOptions {
    /// Worker threads for the contraction; 1 runs inline.
    unsigned threads = 1;
};

KernelBanks build_kernel_banks(const DirectionalFeatureMap& first, const SoftMask& first_mask);

/// Materialises the full similarity volume. Throws on channel mismatch.
SimilarityVolume contract_similarity(const DirectionalFeatureMap& frame, const KernelBank& bank,
                                     const MatchOptions& options = {});

/// out(h, w) = max_k S[k, h, w]. A volume with no kernels yields an empty map.
CueMap reduce_channel_max(const SimilarityVolume& volume);

/// Fused contraction + max that never materialises the volume. Produces the
/// same values as reduce_channel_max(contract_similarity(frame, bank)).
CueMap match_against_bank(const DirectionalFeatureMap& frame, const KernelBank& bank,
                          const MatchOptions& options = {});

MatchCues global_directional_match(const KernelBanks& banks, const DirectionalFeatureMap& frame,
                                   const MatchOptions& options = {});

MatchCues global_directional_match(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                   const DirectionalFeatureMap& frame, const MatchOptions& options = {});

/// Reference implementation: explicit loops over every (pixel, first-frame
/// pixel) pair, no kernel bank. Used as an equivalence oracle and as the
/// baseline of the matching benchmark.
MatchCues brute_force_match_oracle(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                   const DirectionalFeatureMap& frame);

/// Softmax of (target, background) per pixel; the target probability.
SoftMask match_probability(const CueMap& target, const CueMap& background);

}  // namespace dirseg

#endif  // DIRSEG_MATCHING_HPP
