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
#ifndef DIRSEG_GRID_HPP
#define DIRSEG_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirseg {

/// All recoverable failures (bad shapes, malformed files, bad configs) are
/// reported with this exception type. The message is the contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridShape {
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t size() const { return height * width; }
    friend bool operator==(const GridShape&, const GridShape&) = default;
};

std::string to_string(const GridShape& shape);

/// Dense row-major H x W field.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(GridShape shape, T fill = T{}) : shape_(shape), data_(shape.size(), fill) {}
    Grid(GridShape shape, std::vector<T> data) : shape_(shape), data_(std::move(data))
    {
        if (data_.size() != shape_.size())
            throw Error("grid payload does not match " + to_string(shape_));
    }

    GridShape shape() const { return shape_; }
    std::size_t height() const { return shape_.height; }
    std::size_t width() const { return shape_.width; }
    std::size_t size() const { return data_.size(); }

    T& operator()(std::size_t h, std::size_t w) { return data_[h * shape_.width + w]; }
    const T& operator()(std::size_t h, std::size_t w) const { return data_[h * shape_.width + w]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::span<T> values() & { return data_; }
    std::span<const T> values() const& { return data_; }
    void values() && = delete;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    GridShape shape_;
    std::vector<T> data_;
};

/// Real-valued per-pixel cue, e.g. a matching score map.
using CueMap = Grid<double>;

/// Hard mask, one byte per pixel; nonzero is foreground.
using BinaryMask = Grid<std::uint8_t>;

}  // namespace dirseg

#endif  // DIRSEG_GRID_HPP
