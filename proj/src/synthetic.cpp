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
#include "dirseg/synthetic.hpp"

#include <cmath>
#include <numbers>

namespace dirseg {

namespace {

std::vector<double> random_unit(Rng& rng, std::size_t dim)
{
    for (;;) {
        std::vector<double> v(dim);
        double n = 0.0;
        for (double& x : v) {
            x = rng.normal();
            n += x * x;
        }
        n = std::sqrt(n);
        if (n < 1e-6)
            continue;
        for (double& x : v)
            x /= n;
        return v;
    }
}

// Position of a 1-D coordinate moving at constant speed inside [0, range].
long axis_position(long start, long velocity, std::size_t t, long range, bool bounce)
{
    const long p = start + velocity * static_cast<long>(t);
    if (!bounce || range == 0)
        return p;
    const long period = 2 * range;
    long m = p % period;
    if (m < 0)
        m += period;
    return m <= range ? m : period - m;
}

std::vector<LabeledCues> collect_cues(const SyntheticSequence& seq, const FusionHead* head,
                                      const AppearanceConfig& appearance)
{
    std::vector<LabeledCues> out;
    SequenceState state =
        SequenceState::initialize(seq.features.front(), to_soft(seq.truth.front()), appearance);
    for (std::size_t t = 1; t < seq.features.size(); ++t) {
        const DirectionalFeatureMap& frame = seq.features[t];
        CueStack cues = state.cues_for(frame);
        const SoftMask truth = to_soft(seq.truth[t]);
        // teacher forcing without a head, closed loop with one
        SoftMask recycled = head ? fuse_logistic(cues, *head) : truth;
        out.push_back({std::move(cues), truth});
        state = state.advanced(frame, recycled);
    }
    return out;
}

}  // namespace

SyntheticSequenceSpec SyntheticSequenceSpec::from_config(const Config& config)
{
    SyntheticSequenceSpec spec;
    auto positive = [&](const char* key, std::size_t fallback) -> std::size_t {
        const long long v = config.get_int(key, static_cast<long long>(fallback));
        if (v < 1)
            throw Error(std::string("config key '") + key + "' must be at least 1");
        return static_cast<std::size_t>(v);
    };
    spec.grid.height = positive("height", spec.grid.height);
    spec.grid.width = positive("width", spec.grid.width);
    spec.channels = positive("channels", spec.channels);
    const long long frames = config.get_int("frames", static_cast<long long>(spec.frames));
    if (frames < 0)
        throw Error("config key 'frames' must be nonnegative");
    spec.frames = static_cast<std::size_t>(frames);
    spec.side = positive("side", spec.side);
    spec.start_row = config.get_int("start_row", spec.start_row);
    spec.start_col = config.get_int("start_col", spec.start_col);
    spec.velocity_row = config.get_int("velocity_row", spec.velocity_row);
    spec.velocity_col = config.get_int("velocity_col", spec.velocity_col);
    spec.bounce = config.get_int("bounce", spec.bounce ? 1 : 0) != 0;
    spec.separation_degrees = config.get_double("separation_degrees", spec.separation_degrees);
    spec.kappa = config.get_double("kappa_gen", spec.kappa);
    spec.seed = static_cast<std::uint64_t>(config.get_int("seed", static_cast<long long>(spec.seed)));
    return spec;
}

std::pair<std::size_t, std::size_t> square_corner(const SyntheticSequenceSpec& spec, std::size_t t)
{
    if (spec.side > spec.grid.height || spec.side > spec.grid.width)
        throw Error("shape leaves grid");
    const long range_r = static_cast<long>(spec.grid.height - spec.side);
    const long range_c = static_cast<long>(spec.grid.width - spec.side);
    if (spec.start_row < 0 || spec.start_row > range_r || spec.start_col < 0 || spec.start_col > range_c)
        throw Error("shape leaves grid");
    const long r = axis_position(spec.start_row, spec.velocity_row, t, range_r, spec.bounce);
    const long c = axis_position(spec.start_col, spec.velocity_col, t, range_c, spec.bounce);
    if (r < 0 || r > range_r || c < 0 || c > range_c)
        throw Error("shape leaves grid");
    return {static_cast<std::size_t>(r), static_cast<std::size_t>(c)};
}

SyntheticSequence generate_synthetic_sequence(const SyntheticSequenceSpec& spec)
{
    if (spec.channels < 2)
        throw Error("synthetic sequences need at least 2 channels");
    if (!(spec.kappa > 0.0))
        throw Error("kappa_gen must be positive");
    if (!(spec.separation_degrees > 0.0 && spec.separation_degrees <= 180.0))
        throw Error("separation_degrees must lie in (0, 180]");
    // validate the whole trajectory before sampling anything
    for (std::size_t t = 0; t <= spec.frames; ++t)
        square_corner(spec, t);

    Rng rng(spec.seed);
    SyntheticSequence seq;
    seq.mu_background = random_unit(rng, spec.channels);
    std::vector<double> tangent = random_unit(rng, spec.channels);
    double along = 0.0;
    for (std::size_t c = 0; c < spec.channels; ++c)
        along += tangent[c] * seq.mu_background[c];
    double tn = 0.0;
    for (std::size_t c = 0; c < spec.channels; ++c) {
        tangent[c] -= along * seq.mu_background[c];
        tn += tangent[c] * tangent[c];
    }
    tn = std::sqrt(tn);
    const double theta = spec.separation_degrees * std::numbers::pi / 180.0;
    seq.mu_foreground.resize(spec.channels);
    for (std::size_t c = 0; c < spec.channels; ++c)
        seq.mu_foreground[c] = std::cos(theta) * seq.mu_background[c] + std::sin(theta) * tangent[c] / tn;
    seq.separation_degrees = angle_degrees(seq.mu_foreground, seq.mu_background);

    const std::size_t n = spec.grid.size();
    for (std::size_t t = 0; t <= spec.frames; ++t) {
        const auto [row, col] = square_corner(spec, t);
        BinaryMask truth(spec.grid, 0);
        for (std::size_t h = row; h < row + spec.side; ++h)
            for (std::size_t w = col; w < col + spec.side; ++w)
                truth(h, w) = 1;

        RawFeatureMap raw(spec.channels, spec.grid);
        auto values = raw.values();
        for (std::size_t l = 0; l < n; ++l) {
            const auto& mu = truth[l] ? seq.mu_foreground : seq.mu_background;
            const std::vector<double> r = sample_vmf(mu, spec.kappa, rng);
            for (std::size_t c = 0; c < spec.channels; ++c)
                values[c * n + l] = r[c];
        }
        seq.features.push_back(assume_directional(std::move(raw)));
        seq.truth.push_back(std::move(truth));
    }
    return seq;
}

FusionFit train_head_on_synthetic(const SyntheticSequenceSpec& spec, const HeadTrainingOptions& options)
{
    if (options.sequences == 0)
        throw Error("empty training set");
    std::vector<SyntheticSequence> sequences;
    for (std::size_t i = 0; i < options.sequences; ++i) {
        SyntheticSequenceSpec s = spec;
        s.seed = spec.seed + i;
        sequences.push_back(generate_synthetic_sequence(s));
    }

    std::vector<LabeledCues> samples;
    for (const auto& seq : sequences) {
        auto cues = collect_cues(seq, nullptr, options.appearance);
        samples.insert(samples.end(), std::make_move_iterator(cues.begin()), std::make_move_iterator(cues.end()));
    }
    if (samples.empty())
        throw Error("empty training set");
    const FusionFit teacher = fit_fusion_head(samples, options.fit);

    for (const auto& seq : sequences) {
        auto cues = collect_cues(seq, &teacher.head, options.appearance);
        samples.insert(samples.end(), std::make_move_iterator(cues.begin()), std::make_move_iterator(cues.end()));
    }
    return fit_fusion_head(samples, options.fit);
}

}  // namespace dirseg
