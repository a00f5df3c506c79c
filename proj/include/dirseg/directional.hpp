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
#ifndef DIRSEG_DIRECTIONAL_HPP
#define DIRSEG_DIRECTIONAL_HPP

#include "dirseg/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dirseg {

/// Vectors shorter than this are treated as the zero vector.
inline constexpr double kNormEpsilon = 1e-12;

/// C x H x W feature tensor stored channel-major, i.e. index (c * H + h) * W + w.
/// This is the layout of the on-disk tensor format.
class RawFeatureMap {
public:
    RawFeatureMap() = default;
    RawFeatureMap(std::size_t channels, GridShape shape);
    RawFeatureMap(std::size_t channels, GridShape shape, std::vector<double> data);

    std::size_t channels() const { return channels_; }
    GridShape shape() const { return shape_; }
    std::size_t height() const { return shape_.height; }
    std::size_t width() const { return shape_.width; }
    std::size_t pixels() const { return shape_.size(); }

    double& at(std::size_t c, std::size_t h, std::size_t w) { return data_[(c * shape_.height + h) * shape_.width + w]; }
    double at(std::size_t c, std::size_t h, std::size_t w) const { return data_[(c * shape_.height + h) * shape_.width + w]; }

    /// Channel c as a contiguous H*W plane.
    std::span<const double> plane(std::size_t c) const { return {data_.data() + c * pixels(), pixels()}; }
    std::span<double> values() & { return data_; }
    std::span<const double> values() const& { return data_; }
    void values() && = delete;

    friend bool operator==(const RawFeatureMap&, const RawFeatureMap&) = default;

private:
    std::size_t channels_ = 0;
    GridShape shape_;
    std::vector<double> data_;
};

/// Feature map whose every spatial C-vector is unit length or exactly zero.
/// Only obtainable through l2_normalize() or assume_directional(), so the
/// invariant holds for every instance.
class DirectionalFeatureMap {
public:
    DirectionalFeatureMap() = default;

    std::size_t channels() const { return map_.channels(); }
    GridShape shape() const { return map_.shape(); }
    std::size_t height() const { return map_.height(); }
    std::size_t width() const { return map_.width(); }
    std::size_t pixels() const { return map_.pixels(); }

    double at(std::size_t c, std::size_t h, std::size_t w) const { return map_.at(c, h, w); }
    std::span<const double> plane(std::size_t c) const { return map_.plane(c); }
    std::span<const double> values() const& { return map_.values(); }
    void values() && = delete;
    const RawFeatureMap& raw() const { return map_; }

    /// Feature vector at flat pixel index l = h * W + w.
    std::vector<double> vector_at(std::size_t l) const;

    /// Pixel-major copy: row l holds the C-vector of pixel l.
    std::vector<double> pixel_major() const;

    friend bool operator==(const DirectionalFeatureMap&, const DirectionalFeatureMap&) = default;

private:
    friend DirectionalFeatureMap l2_normalize(const RawFeatureMap& raw);
    friend DirectionalFeatureMap assume_directional(RawFeatureMap raw, double tolerance);
    explicit DirectionalFeatureMap(RawFeatureMap map) : map_(std::move(map)) {}

    RawFeatureMap map_;
};

/// Divides every spatial vector by its L2 norm. Zero vectors (norm below
/// kNormEpsilon) come out as exact zeros. Throws Error("non-finite feature").
DirectionalFeatureMap l2_normalize(const RawFeatureMap& raw);

/// Wraps an already-normalized map after checking each vector is unit within
/// `tolerance` or exactly zero. Throws Error("feature vector is not unit length").
DirectionalFeatureMap assume_directional(RawFeatureMap raw, double tolerance = 1e-6);

/// H x W field with values in [0,1].
class SoftMask {
public:
    SoftMask() = default;
    explicit SoftMask(GridShape shape, double fill = 0.0);
    explicit SoftMask(Grid<double> values);
    SoftMask(GridShape shape, std::vector<double> values) : SoftMask(Grid<double>(shape, std::move(values))) {}

    GridShape shape() const { return grid_.shape(); }
    std::size_t height() const { return grid_.height(); }
    std::size_t width() const { return grid_.width(); }
    std::size_t size() const { return grid_.size(); }

    double operator()(std::size_t h, std::size_t w) const { return grid_(h, w); }
    double operator[](std::size_t i) const { return grid_[i]; }
    std::span<const double> values() const& { return grid_.values(); }
    void values() && = delete;
    const Grid<double>& grid() const { return grid_; }

    friend bool operator==(const SoftMask&, const SoftMask&) = default;

private:
    Grid<double> grid_;
};

/// Threshold used whenever a soft value becomes a hard label.
inline constexpr double kMaskThreshold = 0.5;

BinaryMask binarize(const SoftMask& mask, double threshold = kMaskThreshold);
SoftMask to_soft(const BinaryMask& mask);

/// Area-average downsampling. Source dimensions must be integer multiples of
/// the target; otherwise throws Error("incompatible grid").
SoftMask resize_mask(const SoftMask& mask, GridShape target);

/// Nearest-neighbour upscaling by integer factors (visualisation only).
BinaryMask upscale_nearest(const BinaryMask& mask, GridShape target);

}  // namespace dirseg

#endif  // DIRSEG_DIRECTIONAL_HPP
