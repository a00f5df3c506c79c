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
#include "dirseg/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace dirseg {

namespace {

// Register tile: kPixTile frame pixels against kKerTile kernels.
constexpr std::size_t kPixTile = 4;
constexpr std::size_t kKerTile = 8;

// Kernel bank repacked into column panels of kKerTile kernels each. Panel b
// holds channels x kKerTile values, channel-major; the last panel is
// zero-padded and the padding columns are never reported.
struct PackedBank {
    std::size_t kernels = 0;
    std::size_t channels = 0;
    std::size_t panels = 0;
    std::vector<double> data;

    const double* panel(std::size_t b) const { return data.data() + b * channels * kKerTile; }
    std::size_t valid(std::size_t b) const { return std::min(kKerTile, kernels - b * kKerTile); }
};

PackedBank pack_bank(const KernelBank& bank)
{
    PackedBank packed;
    packed.kernels = bank.rows();
    packed.channels = bank.channels();
    packed.panels = (bank.rows() + kKerTile - 1) / kKerTile;
    packed.data.assign(packed.panels * packed.channels * kKerTile, 0.0);
    for (std::size_t k = 0; k < bank.rows(); ++k) {
        const auto row = bank.row(k);
        double* dst = packed.data.data() + (k / kKerTile) * packed.channels * kKerTile + (k % kKerTile);
        for (std::size_t c = 0; c < packed.channels; ++c)
            dst[c * kKerTile] = row[c];
    }
    return packed;
}

// Frame in pixel-major order, zero-padded to a whole number of pixel tiles.
struct PackedFrame {
    std::size_t pixels = 0;
    std::size_t channels = 0;
    std::size_t tiles = 0;
    std::vector<double> data;

    const double* tile(std::size_t t) const { return data.data() + t * kPixTile * channels; }
    std::size_t valid(std::size_t t) const { return std::min(kPixTile, pixels - t * kPixTile); }
};

PackedFrame pack_frame(const DirectionalFeatureMap& frame)
{
    PackedFrame packed;
    packed.pixels = frame.pixels();
    packed.channels = frame.channels();
    packed.tiles = (packed.pixels + kPixTile - 1) / kPixTile;
    packed.data.assign(packed.tiles * kPixTile * packed.channels, 0.0);
    const auto src = frame.values();
    for (std::size_t c = 0; c < packed.channels; ++c)
        for (std::size_t l = 0; l < packed.pixels; ++l)
            packed.data[l * packed.channels + c] = src[c * packed.pixels + l];
    return packed;
}

using Tile = double[kPixTile][kKerTile];

inline void multiply_tile(const double* pixels, const double* panel, std::size_t channels, Tile& acc)
{
    for (auto& row : acc)
        for (double& v : row)
            v = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
        const double* k = panel + c * kKerTile;
        for (std::size_t i = 0; i < kPixTile; ++i) {
            const double f = pixels[i * channels + c];
            for (std::size_t j = 0; j < kKerTile; ++j)
                acc[i][j] += f * k[j];
        }
    }
}

// Runs every (pixel tile, kernel panel) product and hands tiles to `sink`.
// Pixel tiles are split into contiguous ranges, one per worker; each worker
// owns its output pixels, so results do not depend on the thread count.
template <typename Sink>
void for_each_tile(const PackedFrame& frame, const PackedBank& bank, unsigned threads, Sink&& sink)
{
    auto work = [&](std::size_t t_begin, std::size_t t_end) {
        Tile acc;
        for (std::size_t t = t_begin; t < t_end; ++t) {
            for (std::size_t b = 0; b < bank.panels; ++b) {
                multiply_tile(frame.tile(t), bank.panel(b), frame.channels, acc);
                sink(t, b, acc);
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(frame.tiles, 1));
    if (workers == 1) {
        work(0, frame.tiles);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (frame.tiles + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(frame.tiles, begin + chunk);
        if (begin < end)
            pool.emplace_back(work, begin, end);
    }
}

void check_channels(const DirectionalFeatureMap& frame, const KernelBank& bank)
{
    if (frame.channels() != bank.channels())
        throw Error("channel mismatch: frame has " + std::to_string(frame.channels()) + ", kernel bank has " +
                    std::to_string(bank.channels()));
}

}  // namespace

KernelBank::KernelBank(std::size_t rows, std::size_t channels, std::vector<double> data)
    : rows_(rows), channels_(channels), data_(std::move(data))
{
    if (data_.size() != rows_ * channels_)
        throw Error("kernel bank payload does not match declared dimensions");
}

SimilarityVolume::SimilarityVolume(std::size_t kernels, GridShape shape)
    : kernels_(kernels), shape_(shape), data_(kernels * shape.size(), 0.0)
{
}

KernelBanks build_kernel_banks(const DirectionalFeatureMap& first, const SoftMask& first_mask)
{
    if (first.shape() != first_mask.shape())
        throw Error("shape mismatch: features " + to_string(first.shape()) + ", mask " +
                    to_string(first_mask.shape()));

    const std::size_t n = first.pixels();
    const std::size_t ch = first.channels();
    std::vector<double> target(n * ch);
    std::vector<double> background(n * ch);
    const auto src = first.values();
    for (std::size_t c = 0; c < ch; ++c) {
        for (std::size_t l = 0; l < n; ++l) {
            const double f = src[c * n + l];
            const double m = first_mask[l];
            target[l * ch + c] = m * f;
            background[l * ch + c] = (1.0 - m) * f;
        }
    }
    return {KernelBank(n, ch, std::move(target)), KernelBank(n, ch, std::move(background))};
}

SimilarityVolume contract_similarity(const DirectionalFeatureMap& frame, const KernelBank& bank,
                                     const MatchOptions& options)
{
    check_channels(frame, bank);
    const PackedFrame pf = pack_frame(frame);
    const PackedBank pb = pack_bank(bank);
    SimilarityVolume volume(bank.rows(), frame.shape());

    for_each_tile(pf, pb, options.threads, [&](std::size_t t, std::size_t b, const Tile& acc) {
        const std::size_t np = pf.valid(t);
        const std::size_t nk = pb.valid(b);
        for (std::size_t j = 0; j < nk; ++j) {
            auto slice = volume.slice(b * kKerTile + j);
            for (std::size_t i = 0; i < np; ++i)
                slice[t * kPixTile + i] = acc[i][j];
        }
    });
    return volume;
}

CueMap reduce_channel_max(const SimilarityVolume& volume)
{
    if (volume.kernels() == 0)
        return CueMap(volume.shape(), 0.0);
    CueMap out(volume.shape(), -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < volume.kernels(); ++k) {
        const auto slice = volume.slice(k);
        for (std::size_t l = 0; l < slice.size(); ++l)
            out[l] = std::max(out[l], slice[l]);
    }
    return out;
}

CueMap match_against_bank(const DirectionalFeatureMap& frame, const KernelBank& bank, const MatchOptions& options)
{
    check_channels(frame, bank);
    if (bank.rows() == 0)
        return CueMap(frame.shape(), 0.0);
    const PackedFrame pf = pack_frame(frame);
    const PackedBank pb = pack_bank(bank);
    CueMap out(frame.shape(), -std::numeric_limits<double>::infinity());

    for_each_tile(pf, pb, options.threads, [&](std::size_t t, std::size_t b, const Tile& acc) {
        const std::size_t np = pf.valid(t);
        const std::size_t nk = pb.valid(b);
        for (std::size_t i = 0; i < np; ++i) {
            double best = out[t * kPixTile + i];
            for (std::size_t j = 0; j < nk; ++j)
                best = std::max(best, acc[i][j]);
            out[t * kPixTile + i] = best;
        }
    });
    return out;
}

MatchCues global_directional_match(const KernelBanks& banks, const DirectionalFeatureMap& frame,
                                   const MatchOptions& options)
{
    return {match_against_bank(frame, banks.target, options), match_against_bank(frame, banks.background, options)};
}

MatchCues global_directional_match(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                   const DirectionalFeatureMap& frame, const MatchOptions& options)
{
    if (first.channels() != frame.channels())
        throw Error("channel mismatch between first frame and current frame");
    return global_directional_match(build_kernel_banks(first, first_mask), frame, options);
}

MatchCues brute_force_match_oracle(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                   const DirectionalFeatureMap& frame)
{
    if (first.shape() != first_mask.shape())
        throw Error("shape mismatch between first frame and first mask");
    if (first.channels() != frame.channels())
        throw Error("channel mismatch between first frame and current frame");

    const std::size_t ch = frame.channels();
    const std::size_t fh = first.height();
    const std::size_t fw = first.width();
    MatchCues cues{CueMap(frame.shape()), CueMap(frame.shape())};
    for (std::size_t h = 0; h < frame.height(); ++h) {
        for (std::size_t w = 0; w < frame.width(); ++w) {
            double best_t = -std::numeric_limits<double>::infinity();
            double best_b = -std::numeric_limits<double>::infinity();
            for (std::size_t qh = 0; qh < fh; ++qh) {
                for (std::size_t qw = 0; qw < fw; ++qw) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < ch; ++c)
                        dot += frame.at(c, h, w) * first.at(c, qh, qw);
                    const double m = first_mask(qh, qw);
                    best_t = std::max(best_t, m * dot);
                    best_b = std::max(best_b, (1.0 - m) * dot);
                }
            }
            cues.target(h, w) = best_t;
            cues.background(h, w) = best_b;
        }
    }
    return cues;
}

SoftMask match_probability(const CueMap& target, const CueMap& background)
{
    if (target.shape() != background.shape())
        throw Error("shape mismatch between target and background cues");
    Grid<double> p(target.shape());
    for (std::size_t l = 0; l < p.size(); ++l) {
        const double hi = std::max(target[l], background[l]);
        const double et = std::exp(target[l] - hi);
        const double eb = std::exp(background[l] - hi);
        p[l] = et / (et + eb);
    }
    return SoftMask(std::move(p));
}

}  // namespace dirseg
