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
#include "dirseg/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace dirseg {

namespace {

double sigmoid(double z)
{
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z)
double softplus(double z)
{
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double logit(const CueStack& cues, const FusionHead& head, std::size_t l)
{
    double z = head.bias;
    for (std::size_t c = 0; c < kCueChannels; ++c)
        z += head.weights[c] * cues.at(c, l);
    return z;
}

}  // namespace

CueMap CueStack::channel(std::size_t c) const
{
    CueMap out(shape_);
    for (std::size_t l = 0; l < out.size(); ++l)
        out[l] = at(c, l);
    return out;
}

CueStack assemble_cues(const CueMap& match_target, const CueMap& match_background, const ScoreField& scores,
                       const SoftMask& previous_mask)
{
    const GridShape shape = match_target.shape();
    if (match_background.shape() != shape || scores.shape() != shape || previous_mask.shape() != shape)
        throw Error("cue shape mismatch");
    CueStack stack(shape);
    for (std::size_t l = 0; l < shape.size(); ++l) {
        stack.at(kCueMatchTarget, l) = match_target[l];
        stack.at(kCueMatchBackground, l) = match_background[l];
        for (std::size_t k = 0; k < kComponents; ++k)
            stack.at(kCueBackgroundBase + k, l) = scores.at(l, k);
        stack.at(kCuePreviousMask, l) = previous_mask[l];
    }
    for (std::size_t c = 0; c < kCueChannels; ++c)
        for (std::size_t l = 0; l < shape.size(); ++l)
            if (!std::isfinite(stack.at(c, l)))
                throw Error("non-finite cue");
    return stack;
}

SoftMask fuse_logistic(const CueStack& cues, const FusionHead& head)
{
    Grid<double> y(cues.shape());
    for (std::size_t l = 0; l < y.size(); ++l)
        y[l] = sigmoid(logit(cues, head, l));
    return SoftMask(std::move(y));
}

LossAndGradient cross_entropy(const FusionHead& head, std::span<const LabeledCues> samples)
{
    LossAndGradient out;
    std::size_t count = 0;
    for (const auto& sample : samples) {
        if (sample.cues.shape() != sample.target.shape())
            throw Error("training target shape does not match its cues");
        for (std::size_t l = 0; l < sample.target.size(); ++l) {
            const double z = logit(sample.cues, head, l);
            const double t = sample.target[l];
            out.loss += softplus(z) - t * z;
            const double residual = sigmoid(z) - t;
            for (std::size_t c = 0; c < kCueChannels; ++c)
                out.gradient.weights[c] += residual * sample.cues.at(c, l);
            out.gradient.bias += residual;
        }
        count += sample.target.size();
    }
    if (count == 0)
        throw Error("empty training set");
    const double inv = 1.0 / static_cast<double>(count);
    out.loss *= inv;
    for (double& g : out.gradient.weights)
        g *= inv;
    out.gradient.bias *= inv;
    return out;
}

FusionFit fit_fusion_head(std::span<const LabeledCues> samples, const FitOptions& options)
{
    std::size_t count = 0;
    for (const auto& s : samples)
        count += s.target.size();
    if (count == 0)
        throw Error("empty training set");

    std::array<double, kCueChannels> mean{};
    std::array<double, kCueChannels> scale{};
    for (std::size_t c = 0; c < kCueChannels; ++c) {
        double sum = 0.0;
        double sq = 0.0;
        for (const auto& s : samples) {
            for (std::size_t l = 0; l < s.target.size(); ++l) {
                sum += s.cues.at(c, l);
                sq += s.cues.at(c, l) * s.cues.at(c, l);
            }
        }
        mean[c] = sum / static_cast<double>(count);
        const double var = std::max(0.0, sq / static_cast<double>(count) - mean[c] * mean[c]);
        scale[c] = std::sqrt(var) > 1e-12 ? std::sqrt(var) : 1.0;
    }

    std::vector<LabeledCues> standardized;
    standardized.reserve(samples.size());
    for (const auto& s : samples) {
        LabeledCues copy = s;
        for (std::size_t c = 0; c < kCueChannels; ++c)
            for (std::size_t l = 0; l < s.target.size(); ++l)
                copy.cues.at(c, l) = (s.cues.at(c, l) - mean[c]) / scale[c];
        standardized.push_back(std::move(copy));
    }

    FusionFit fit;
    FusionHead z;
    fit.loss_history.reserve(options.steps + 1);
    for (std::size_t step = 0; step < options.steps; ++step) {
        const LossAndGradient lg = cross_entropy(z, standardized);
        fit.loss_history.push_back(lg.loss);
        for (std::size_t c = 0; c < kCueChannels; ++c)
            z.weights[c] -= options.step_size * lg.gradient.weights[c];
        z.bias -= options.step_size * lg.gradient.bias;
    }
    fit.loss_history.push_back(cross_entropy(z, standardized).loss);

    fit.head.bias = z.bias;
    for (std::size_t c = 0; c < kCueChannels; ++c) {
        fit.head.weights[c] = z.weights[c] / scale[c];
        fit.head.bias -= z.weights[c] * mean[c] / scale[c];
    }
    return fit;
}

SequenceState SequenceState::initialize(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                        const AppearanceConfig& config, const MatchOptions& match)
{
    auto banks = std::make_shared<const KernelBanks>(build_kernel_banks(first, first_mask));
    return SequenceState(init_from_first_frame(first, first_mask, config), std::move(banks), first_mask, 0, match);
}

void SequenceState::check_frame(const DirectionalFeatureMap& frame) const
{
    if (frame.shape() != shape() || frame.channels() != channels())
        throw Error("frame shape drift: expected " + std::to_string(channels()) + "x" + to_string(shape()) +
                    ", got " + std::to_string(frame.channels()) + "x" + to_string(frame.shape()));
}

CueStack SequenceState::cues_for(const DirectionalFeatureMap& frame) const
{
    check_frame(frame);
    const MatchCues match = global_directional_match(*banks_, frame, match_);
    return assemble_cues(match.target, match.background, component_scores(frame, model_), previous_);
}

SequenceState SequenceState::advanced(const DirectionalFeatureMap& frame, const SoftMask& y) const
{
    check_frame(frame);
    if (y.shape() != shape())
        throw Error("prediction shape does not match sequence");
    return SequenceState(update_model(model_, frame, y), banks_, y, frame_ + 1, match_);
}

FrameResult segment_frame(const SequenceState& state, const DirectionalFeatureMap& frame, const FusionHead& head)
{
    SoftMask y = fuse_logistic(state.cues_for(frame), head);
    SequenceState next = state.advanced(frame, y);
    return {std::move(y), std::move(next)};
}

std::vector<SoftMask> segment_sequence(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                       std::span<const DirectionalFeatureMap> frames, const FusionHead& head,
                                       const AppearanceConfig& config, const MatchOptions& match)
{
    std::vector<SoftMask> out{first_mask};
    out.reserve(frames.size() + 1);
    SequenceState state = SequenceState::initialize(first, first_mask, config, match);
    for (const auto& frame : frames) {
        FrameResult r = segment_frame(state, frame, head);
        out.push_back(std::move(r.prediction));
        state = std::move(r.next);
    }
    return out;
}

LabelMap merge_multi_object(std::span<const SoftMask> objects)
{
    if (objects.empty() || objects.size() > 255)
        throw Error("object count must be in 1..255");
    const GridShape shape = objects.front().shape();
    for (const auto& m : objects)
        if (m.shape() != shape)
            throw Error("object masks differ in shape");

    LabelMap labels(shape, 0);
    for (std::size_t l = 0; l < shape.size(); ++l) {
        std::size_t best = 0;
        for (std::size_t o = 1; o < objects.size(); ++o)
            if (objects[o][l] > objects[best][l])
                best = o;
        if (objects[best][l] >= kMaskThreshold)
            labels[l] = static_cast<std::uint8_t>(best + 1);
    }
    return labels;
}

}  // namespace dirseg
