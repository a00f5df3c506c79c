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
#include "dirseg/directional.hpp"

#include <algorithm>
#include <cmath>

namespace dirseg {

std::string to_string(const GridShape& shape)
{
    return std::to_string(shape.height) + "x" + std::to_string(shape.width);
}

RawFeatureMap::RawFeatureMap(std::size_t channels, GridShape shape)
    : RawFeatureMap(channels, shape, std::vector<double>(channels * shape.size(), 0.0))
{
}

RawFeatureMap::RawFeatureMap(std::size_t channels, GridShape shape, std::vector<double> data)
    : channels_(channels), shape_(shape), data_(std::move(data))
{
    if (channels_ == 0 || shape_.height == 0 || shape_.width == 0)
        throw Error("feature map dimensions must be positive");
    if (data_.size() != channels_ * shape_.size())
        throw Error("feature payload does not match declared dimensions");
}

std::vector<double> DirectionalFeatureMap::vector_at(std::size_t l) const
{
    std::vector<double> v(channels());
    const auto all = values();
    for (std::size_t c = 0; c < v.size(); ++c)
        v[c] = all[c * pixels() + l];
    return v;
}

std::vector<double> DirectionalFeatureMap::pixel_major() const
{
    const std::size_t n = pixels();
    const std::size_t ch = channels();
    std::vector<double> out(n * ch);
    const auto all = values();
    for (std::size_t c = 0; c < ch; ++c)
        for (std::size_t l = 0; l < n; ++l)
            out[l * ch + c] = all[c * n + l];
    return out;
}

DirectionalFeatureMap l2_normalize(const RawFeatureMap& raw)
{
    const std::size_t n = raw.pixels();
    const std::size_t ch = raw.channels();
    const auto in = raw.values();
    if (!std::all_of(in.begin(), in.end(), [](double v) { return std::isfinite(v); }))
        throw Error("non-finite feature");

    std::vector<double> norms(n, 0.0);
    for (std::size_t c = 0; c < ch; ++c)
        for (std::size_t l = 0; l < n; ++l)
            norms[l] += in[c * n + l] * in[c * n + l];
    for (auto& v : norms)
        v = std::sqrt(v);

    std::vector<double> out(in.begin(), in.end());
    for (std::size_t c = 0; c < ch; ++c) {
        for (std::size_t l = 0; l < n; ++l) {
            double& v = out[c * n + l];
            v = norms[l] < kNormEpsilon ? 0.0 : v / norms[l];
        }
    }
    return DirectionalFeatureMap(RawFeatureMap(ch, raw.shape(), std::move(out)));
}

DirectionalFeatureMap assume_directional(RawFeatureMap raw, double tolerance)
{
    const std::size_t n = raw.pixels();
    const auto in = raw.values();
    std::vector<double> sq(n, 0.0);
    for (std::size_t c = 0; c < raw.channels(); ++c) {
        for (std::size_t l = 0; l < n; ++l) {
            const double v = in[c * n + l];
            if (!std::isfinite(v))
                throw Error("non-finite feature");
            sq[l] += v * v;
        }
    }
    for (double s : sq) {
        if (s != 0.0 && std::abs(std::sqrt(s) - 1.0) > tolerance)
            throw Error("feature vector is not unit length");
    }
    return DirectionalFeatureMap(std::move(raw));
}

SoftMask::SoftMask(GridShape shape, double fill) : SoftMask(Grid<double>(shape, fill)) {}

SoftMask::SoftMask(Grid<double> values) : grid_(std::move(values))
{
    for (double v : grid_.values()) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw Error("mask value outside [0,1]");
    }
}

BinaryMask binarize(const SoftMask& mask, double threshold)
{
    BinaryMask out(mask.shape());
    for (std::size_t i = 0; i < mask.size(); ++i)
        out[i] = mask[i] >= threshold ? 1 : 0;
    return out;
}

SoftMask to_soft(const BinaryMask& mask)
{
    Grid<double> out(mask.shape());
    for (std::size_t i = 0; i < mask.size(); ++i)
        out[i] = mask[i] ? 1.0 : 0.0;
    return SoftMask(std::move(out));
}

SoftMask resize_mask(const SoftMask& mask, GridShape target)
{
    if (target.height == 0 || target.width == 0 || mask.height() % target.height != 0 ||
        mask.width() % target.width != 0)
        throw Error("incompatible grid");

    const std::size_t fy = mask.height() / target.height;
    const std::size_t fx = mask.width() / target.width;
    const double area = static_cast<double>(fy * fx);
    Grid<double> out(target);
    for (std::size_t h = 0; h < target.height; ++h) {
        for (std::size_t w = 0; w < target.width; ++w) {
            double sum = 0.0;
            for (std::size_t dy = 0; dy < fy; ++dy)
                for (std::size_t dx = 0; dx < fx; ++dx)
                    sum += mask(h * fy + dy, w * fx + dx);
            // rounding can push a mean of values in [0,1] a hair outside
            out(h, w) = std::clamp(sum / area, 0.0, 1.0);
        }
    }
    return SoftMask(std::move(out));
}

BinaryMask upscale_nearest(const BinaryMask& mask, GridShape target)
{
    if (mask.height() == 0 || mask.width() == 0 || target.height % mask.height() != 0 ||
        target.width % mask.width() != 0)
        throw Error("incompatible grid");
    const std::size_t fy = target.height / mask.height();
    const std::size_t fx = target.width / mask.width();
    BinaryMask out(target);
    for (std::size_t h = 0; h < target.height; ++h)
        for (std::size_t w = 0; w < target.width; ++w)
            out(h, w) = mask(h / fy, w / fx);
    return out;
}

}  // namespace dirseg
