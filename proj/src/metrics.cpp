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
#include "dirseg/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace dirseg {

namespace {

void check_same(const BinaryMask& a, const BinaryMask& b)
{
    if (a.shape() != b.shape())
        throw Error("mask shape mismatch: " + to_string(a.shape()) + " vs " + to_string(b.shape()));
}

// Number of `from` boundary pixels with a `to` boundary pixel within radius.
std::size_t matched(const BinaryMask& from, const BinaryMask& to, double radius)
{
    const long r = static_cast<long>(std::floor(radius));
    const double r2 = radius * radius;
    const long height = static_cast<long>(from.height());
    const long width = static_cast<long>(from.width());
    std::size_t count = 0;
    for (long h = 0; h < height; ++h) {
        for (long w = 0; w < width; ++w) {
            if (!from(h, w))
                continue;
            bool hit = false;
            for (long dy = -r; dy <= r && !hit; ++dy) {
                for (long dx = -r; dx <= r && !hit; ++dx) {
                    const long y = h + dy;
                    const long x = w + dx;
                    if (y < 0 || y >= height || x < 0 || x >= width)
                        continue;
                    if (static_cast<double>(dy * dy + dx * dx) <= r2 && to(y, x))
                        hit = true;
                }
            }
            count += hit ? 1 : 0;
        }
    }
    return count;
}

}  // namespace

double jaccard(const BinaryMask& pred, const BinaryMask& gt)
{
    check_same(pred, gt);
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] != 0;
        const bool g = gt[i] != 0;
        inter += (p && g) ? 1 : 0;
        uni += (p || g) ? 1 : 0;
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMask boundary_pixels(const BinaryMask& mask)
{
    const std::size_t height = mask.height();
    const std::size_t width = mask.width();
    BinaryMask out(mask.shape(), 0);
    for (std::size_t h = 0; h < height; ++h) {
        for (std::size_t w = 0; w < width; ++w) {
            if (!mask(h, w))
                continue;
            const bool edge = h == 0 || !mask(h - 1, w) || h + 1 == height || !mask(h + 1, w) || w == 0 ||
                              !mask(h, w - 1) || w + 1 == width || !mask(h, w + 1);
            out(h, w) = edge ? 1 : 0;
        }
    }
    return out;
}

double boundary_f(const BinaryMask& pred, const BinaryMask& gt, double radius)
{
    check_same(pred, gt);
    if (radius < 0.0)
        throw Error("boundary radius must be nonnegative");
    const BinaryMask pb = boundary_pixels(pred);
    const BinaryMask gb = boundary_pixels(gt);
    const auto np = static_cast<std::size_t>(std::count(pb.values().begin(), pb.values().end(), 1));
    const auto ng = static_cast<std::size_t>(std::count(gb.values().begin(), gb.values().end(), 1));
    if (np == 0 && ng == 0)
        return 1.0;
    if (np == 0 || ng == 0)
        return 0.0;
    const double precision = static_cast<double>(matched(pb, gb, radius)) / static_cast<double>(np);
    const double recall = static_cast<double>(matched(gb, pb, radius)) / static_cast<double>(ng);
    if (precision + recall == 0.0)
        return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double default_boundary_radius(GridShape shape)
{
    const double diagonal = std::hypot(static_cast<double>(shape.height), static_cast<double>(shape.width));
    return std::max(1.0, std::ceil(0.008 * diagonal));
}

}  // namespace dirseg
