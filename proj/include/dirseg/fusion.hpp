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
#ifndef DIRSEG_FUSION_HPP
#define DIRSEG_FUSION_HPP

#include "dirseg/appearance.hpp"
#include "dirseg/directional.hpp"
#include "dirseg/matching.hpp"

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dirseg {

inline constexpr std::size_t kCueChannels = 7;

/// Cue channel order.
enum CueChannel : std::size_t {
    kCueMatchTarget = 0,
    kCueMatchBackground = 1,
    kCueBackgroundBase = 2,
    kCueForegroundBase = 3,
    kCueBackgroundSupplementary = 4,
    kCueForegroundSupplementary = 5,
    kCuePreviousMask = 6,
};

/// 7 x H x W, channel-major.
class CueStack {
public:
    explicit CueStack(GridShape shape) : shape_(shape), data_(kCueChannels * shape.size(), 0.0) {}

    GridShape shape() const { return shape_; }
    double& at(std::size_t c, std::size_t l) { return data_[c * shape_.size() + l]; }
    double at(std::size_t c, std::size_t l) const { return data_[c * shape_.size() + l]; }
    CueMap channel(std::size_t c) const;

private:
    GridShape shape_;
    std::vector<double> data_;
};

struct FusionHead {
    std::array<double, kCueChannels> weights{};
    double bias = 0.0;

    friend bool operator==(const FusionHead&, const FusionHead&) = default;
};

CueStack assemble_cues(const CueMap& match_target, const CueMap& match_background, const ScoreField& scores,
                       const SoftMask& previous_mask);

/// y = sigmoid(sum_c w_c * cue_c + b) per pixel.
SoftMask fuse_logistic(const CueStack& cues, const FusionHead& head);

struct LabeledCues {
    CueStack cues;
    SoftMask target;
};

struct LossAndGradient {
    double loss = 0.0;
    FusionHead gradient;
};

/// Mean pixelwise binary cross-entropy over every sample, and its gradient
/// with respect to the head parameters.
LossAndGradient cross_entropy(const FusionHead& head, std::span<const LabeledCues> samples);

struct FitOptions {
    std::size_t steps = 500;
    double step_size = 1e-2;
};

struct FusionFit {
    FusionHead head;
    /// Loss before each step and after the last one (steps + 1 entries).
    std::vector<double> loss_history;
};

/// Full-batch gradient descent from the zero head. Each cue channel is
/// standardised over the training pixels for the descent and the result is
/// folded back, so the returned head applies to raw cues and the loss
/// trajectory is that of the raw-cue objective. Throws on an empty set.
FusionFit fit_fusion_head(std::span<const LabeledCues> samples, const FitOptions& options);

/// Per-object sequential state. Kernel banks are shared and immutable.
class SequenceState {
public:
    static SequenceState initialize(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                    const AppearanceConfig& config, const MatchOptions& match = {});

    const AppearanceModel& model() const { return model_; }
    const KernelBanks& banks() const { return *banks_; }
    const SoftMask& previous_mask() const { return previous_; }
    std::size_t frame_index() const { return frame_; }
    GridShape shape() const { return previous_.shape(); }
    std::size_t channels() const { return model_.channels(); }
    const MatchOptions& match_options() const { return match_; }

    /// Cues for the next frame from the current state.
    CueStack cues_for(const DirectionalFeatureMap& frame) const;

    /// State after consuming `frame` with foreground probability `y`:
    /// the appearance model is updated with y and y becomes the previous mask.
    SequenceState advanced(const DirectionalFeatureMap& frame, const SoftMask& y) const;

private:
    SequenceState(AppearanceModel model, std::shared_ptr<const KernelBanks> banks, SoftMask previous,
                  std::size_t frame, MatchOptions match)
        : model_(std::move(model)), banks_(std::move(banks)), previous_(std::move(previous)), frame_(frame),
          match_(match) {}

    void check_frame(const DirectionalFeatureMap& frame) const;

    AppearanceModel model_;
    std::shared_ptr<const KernelBanks> banks_;
    SoftMask previous_;
    std::size_t frame_;
    MatchOptions match_;
};

struct FrameResult {
    SoftMask prediction;
    SequenceState next;
};

FrameResult segment_frame(const SequenceState& state, const DirectionalFeatureMap& frame, const FusionHead& head);

/// Returns y_0 = first_mask followed by one prediction per frame.
std::vector<SoftMask> segment_sequence(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                       std::span<const DirectionalFeatureMap> frames, const FusionHead& head,
                                       const AppearanceConfig& config, const MatchOptions& match = {});

using LabelMap = Grid<std::uint8_t>;

/// Label o in 1..O where max_o y^(o) >= 0.5 (lowest index wins ties), else 0.
LabelMap merge_multi_object(std::span<const SoftMask> objects);

}  // namespace dirseg

#endif  // DIRSEG_FUSION_HPP
