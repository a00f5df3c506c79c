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
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace dirseg;

namespace {

RawFeatureMap single_pixel(std::vector<double> v)
{
    const std::size_t c = v.size();
    return RawFeatureMap(c, {1, 1}, std::move(v));
}

double pixel_norm(const DirectionalFeatureMap& f, std::size_t l)
{
    double s = 0.0;
    for (double v : f.vector_at(l))
        s += v * v;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("l2_normalize scales a 3-4-5 vector")
{
    const auto f = l2_normalize(single_pixel({3, 4, 0, 0}));
    CHECK(f.at(0, 0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(f.at(1, 0, 0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(f.at(2, 0, 0) == 0.0);
    CHECK(f.at(3, 0, 0) == 0.0);
}

TEST_CASE("l2_normalize leaves unit vectors alone and passes zeros through")
{
    const auto unit = l2_normalize(single_pixel({0, 1, 0}));
    CHECK(unit.vector_at(0) == std::vector<double>{0, 1, 0});

    const auto zero = l2_normalize(single_pixel({0, 0, 0}));
    CHECK(zero.vector_at(0) == std::vector<double>{0, 0, 0});

    // below the epsilon counts as zero
    const auto tiny = l2_normalize(single_pixel({1e-13, 0, 0}));
    CHECK(tiny.vector_at(0) == std::vector<double>{0, 0, 0});
}

TEST_CASE("l2_normalize rejects non-finite input")
{
    CHECK_THROWS_WITH_AS(l2_normalize(single_pixel({1, std::numeric_limits<double>::quiet_NaN()})),
                         "non-finite feature", Error);
    CHECK_THROWS_WITH_AS(l2_normalize(single_pixel({std::numeric_limits<double>::infinity(), 0})),
                         "non-finite feature", Error);
}

TEST_CASE("l2_normalize properties on random maps")
{
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t c = 1 + rng.next() % 16;
        const GridShape shape{1 + rng.next() % 6, 1 + rng.next() % 6};
        RawFeatureMap raw(c, shape);
        for (double& v : raw.values())
            v = 10.0 * rng.normal();
        // plant a zero vector
        for (std::size_t ch = 0; ch < c; ++ch)
            raw.at(ch, 0, 0) = 0.0;

        const auto once = l2_normalize(raw);
        const auto twice = l2_normalize(once.raw());
        for (std::size_t i = 0; i < once.values().size(); ++i)
            CHECK(std::abs(once.values()[i] - twice.values()[i]) < 1e-6);

        for (std::size_t l = 0; l < once.pixels(); ++l) {
            const double n = pixel_norm(once, l);
            CHECK((n == 0.0 || std::abs(n - 1.0) < 1e-6));
        }
        CHECK(pixel_norm(once, 0) == 0.0);

        // direction preserved: positive multiple of the input
        for (std::size_t l = 1; l < once.pixels(); ++l) {
            double in_norm = 0.0;
            for (std::size_t ch = 0; ch < c; ++ch)
                in_norm += raw.values()[ch * raw.pixels() + l] * raw.values()[ch * raw.pixels() + l];
            in_norm = std::sqrt(in_norm);
            for (std::size_t ch = 0; ch < c; ++ch) {
                const double in = raw.values()[ch * raw.pixels() + l];
                CHECK(once.values()[ch * raw.pixels() + l] * in_norm == doctest::Approx(in).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("assume_directional validates the unit invariant")
{
    CHECK_NOTHROW(assume_directional(single_pixel({0.6, 0.8})));
    CHECK_NOTHROW(assume_directional(single_pixel({0.0, 0.0})));
    CHECK_THROWS_WITH_AS(assume_directional(single_pixel({1.0, 1.0})), "feature vector is not unit length", Error);
}

TEST_CASE("SoftMask rejects values outside [0,1]")
{
    CHECK_THROWS_AS(SoftMask({1, 2}, std::vector<double>{0.5, 1.5}), Error);
    CHECK_THROWS_AS(SoftMask({1, 1}, std::vector<double>{-0.1}), Error);
    CHECK_THROWS_AS(SoftMask({1, 1}, std::vector<double>{std::nan("")}), Error);
}

TEST_CASE("resize_mask averages blocks")
{
    const SoftMask ones({4, 6}, 1.0);
    const SoftMask r1 = resize_mask(ones, {2, 3});
    for (double v : r1.values())
        CHECK(v == 1.0);

    const SoftMask block({2, 2}, std::vector<double>{1, 1, 0, 0});
    const SoftMask r2 = resize_mask(block, {1, 1});
    CHECK(r2[0] == 0.5);

    const SoftMask zeros({6, 6}, 0.0);
    const SoftMask r3 = resize_mask(zeros, {3, 2});
    for (double v : r3.values())
        CHECK(v == 0.0);
}

TEST_CASE("resize_mask rejects non-divisible grids")
{
    const SoftMask m({5, 4}, 1.0);
    CHECK_THROWS_WITH_AS(resize_mask(m, {2, 2}), "incompatible grid", Error);
    CHECK_THROWS_WITH_AS(resize_mask(m, {5, 3}), "incompatible grid", Error);
}

TEST_CASE("resize_mask output stays within each block's range")
{
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t fy = 1 + rng.next() % 4, fx = 1 + rng.next() % 4;
        const GridShape target{1 + rng.next() % 5, 1 + rng.next() % 5};
        const SoftMask src = testing::random_soft_mask({target.height * fy, target.width * fx}, rng);
        const SoftMask out = resize_mask(src, target);
        for (std::size_t h = 0; h < target.height; ++h) {
            for (std::size_t w = 0; w < target.width; ++w) {
                double lo = 1.0, hi = 0.0;
                for (std::size_t dy = 0; dy < fy; ++dy)
                    for (std::size_t dx = 0; dx < fx; ++dx) {
                        lo = std::min(lo, src(h * fy + dy, w * fx + dx));
                        hi = std::max(hi, src(h * fy + dy, w * fx + dx));
                    }
                CHECK(out(h, w) >= lo - 1e-15);
                CHECK(out(h, w) <= hi + 1e-15);
            }
        }
    }
}

TEST_CASE("binarize uses the 0.5 threshold; upscale_nearest replicates")
{
    const SoftMask m({1, 3}, std::vector<double>{0.49, 0.5, 0.9});
    const BinaryMask b = binarize(m);
    CHECK(b[0] == 0);
    CHECK(b[1] == 1);
    CHECK(b[2] == 1);

    const BinaryMask up = upscale_nearest(b, {2, 6});
    CHECK(up(1, 0) == 0);
    CHECK(up(1, 1) == 0);
    CHECK(up(0, 2) == 1);
    CHECK(up(1, 5) == 1);
    CHECK_THROWS_AS(upscale_nearest(b, {2, 5}), Error);
}
