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
#include "dirseg/appearance.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace dirseg;

namespace {

DirectionalFeatureMap grid2d(GridShape shape, const std::vector<std::array<double, 2>>& px)
{
    RawFeatureMap raw(2, shape);
    for (std::size_t l = 0; l < px.size(); ++l) {
        raw.values()[l] = px[l][0];
        raw.values()[shape.size() + l] = px[l][1];
    }
    return assume_directional(std::move(raw));
}

void check_vec(const std::vector<double>& v, std::array<double, 2> expected, double tol)
{
    REQUIRE(v.size() == 2);
    CHECK(std::abs(v[0] - expected[0]) < tol);
    CHECK(std::abs(v[1] - expected[1]) < tol);
}

AppearanceModel model_2d(std::array<double, 2> mu, double kappa, double lambda)
{
    std::vector<double> m{mu[0], mu[1]};
    return AppearanceModel({m, m, m, m}, kappa, lambda);
}

double norm(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("estimate_mean_direction")
{
    const auto same = grid2d({1, 3}, {{0.6, 0.8}, {0.6, 0.8}, {0.6, 0.8}});
    check_vec(*estimate_mean_direction(same, Grid<double>({1, 3}, 1.0)), {0.6, 0.8}, 1e-15);

    const auto antipodal = grid2d({1, 2}, {{1, 0}, {-1, 0}});
    CHECK_FALSE(estimate_mean_direction(antipodal, Grid<double>({1, 2}, 1.0)).has_value());
    CHECK_FALSE(estimate_mean_direction(same, Grid<double>({1, 3}, 0.0)).has_value());

    // 0.5*(1,0) + 0.25*(0,1) + 1.0*(0.6,0.8) = (1.1, 1.05)
    const auto three = grid2d({1, 3}, {{1, 0}, {0, 1}, {0.6, 0.8}});
    Grid<double> w({1, 3});
    w[0] = 0.5, w[1] = 0.25, w[2] = 1.0;
    const double n = std::hypot(1.1, 1.05);
    check_vec(*estimate_mean_direction(three, w), {1.1 / n, 1.05 / n}, 1e-6);

    CHECK_THROWS_AS(estimate_mean_direction(three, Grid<double>({3, 1}, 1.0)), Error);
}

TEST_CASE("component_scores")
{
    const auto f = grid2d({1, 3}, {{1, 0}, {0, 1}, {0.6, 0.8}});
    const auto s30 = component_scores(f, model_2d({1, 0}, 30.0, 0.1));
    CHECK(s30.at(0, 0) == 30.0);
    CHECK(s30.at(1, 2) == 0.0);
    const auto s1 = component_scores(f, model_2d({1, 0}, 1.0, 0.1));
    CHECK(s1.at(2, 3) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s1.channel(3)[2] == s1.at(2, 3));

    Rng rng(1);
    const auto g = testing::random_directional(8, {3, 3}, rng);
    const auto m = init_from_first_frame(g, testing::random_hard_mask({3, 3}, rng), {});
    const auto s = component_scores(g, m);
    for (std::size_t l = 0; l < 9; ++l)
        for (std::size_t k = 0; k < kComponents; ++k)
            CHECK(std::abs(s.at(l, k)) <= m.kappa() + 1e-9);
}

TEST_CASE("component_posteriors examples")
{
    ScoreField s({1, 2});
    for (std::size_t k = 0; k < 4; ++k)
        s.at(0, k) = 2.0;
    s.at(1, 0) = 1.0;
    s.at(1, 1) = 0.0;
    const std::array<std::size_t, 4> all{0, 1, 2, 3};
    const auto p = component_posteriors(s, all);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(p.at(0, k) == doctest::Approx(0.25).epsilon(1e-15));

    const std::array<std::size_t, 2> pair{0, 1};
    const auto q = component_posteriors(s, pair);
    CHECK(q.at(1, 0) == doctest::Approx(0.731059).epsilon(1e-6));
    CHECK(q.at(1, 1) == doctest::Approx(0.268941).epsilon(1e-6));

    CHECK_THROWS_AS(component_posteriors(s, std::span<const std::size_t>{}), Error);
}

TEST_CASE("component_posteriors properties")
{
    Rng rng(2);
    const std::array<std::size_t, 4> all{0, 1, 2, 3};
    for (int trial = 0; trial < 100; ++trial) {
        ScoreField s({3, 4});
        ScoreField shifted({3, 4});
        for (std::size_t l = 0; l < 12; ++l) {
            const double c = 100.0 * rng.normal();
            for (std::size_t k = 0; k < 4; ++k) {
                s.at(l, k) = 10.0 * (2.0 * rng.uniform() - 1.0);
                shifted.at(l, k) = s.at(l, k) + c;
            }
        }
        const auto p = component_posteriors(s, all);
        const auto ps = component_posteriors(shifted, all);
        for (std::size_t l = 0; l < 12; ++l) {
            double total = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                total += p.at(l, k);
                CHECK(p.at(l, k) > 0.0);
                CHECK(p.at(l, k) < 1.0);
                CHECK(std::abs(p.at(l, k) - ps.at(l, k)) < 1e-9);
                for (std::size_t j = 0; j < 4; ++j)
                    if (s.at(l, k) < s.at(l, j))
                        CHECK(p.at(l, k) <= p.at(l, j));
            }
            CHECK(std::abs(total - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("soft labels")
{
    const SoftMask y({1, 3}, std::vector<double>{1.0, 0.3, 0.0});
    const auto base = base_soft_labels(y);
    CHECK(base.at(0, 0) == 0.0);
    CHECK(base.at(0, 1) == 1.0);
    CHECK(base.at(1, 0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(base.at(1, 1) == 0.3);
    CHECK(base.at(2, 0) == 1.0);
    for (std::size_t l = 0; l < 3; ++l) {
        CHECK(base.at(l, 2) == 0.0);
        CHECK(base.at(l, 3) == 0.0);
    }

    PosteriorField p({1, 3}, 2);
    p.at(0, 0) = 0.2, p.at(0, 1) = 0.8;  // p >= alpha for fg
    p.at(1, 0) = 0.7, p.at(1, 1) = 0.3;  // exact
    p.at(2, 0) = 0.6, p.at(2, 1) = 0.4;  // alpha0 = 1
    const auto sup = supplementary_soft_labels(base, p);
    CHECK(sup.at(0, 2) == 0.0);
    CHECK(sup.at(0, 3) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sup.at(1, 2) == 0.0);
    CHECK(sup.at(1, 3) == 0.0);
    CHECK(sup.at(2, 2) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(sup.at(2, 3) == 0.0);
}

TEST_CASE("init_from_first_frame single foreground pixel and unit means")
{
    Rng rng(3);
    const auto f = testing::random_directional(6, {4, 4}, rng);
    Grid<double> m({4, 4}, 0.0);
    m(2, 1) = 1.0;
    const auto model = init_from_first_frame(f, SoftMask(m), {});
    const auto expected = f.vector_at(2 * 4 + 1);
    for (std::size_t c = 0; c < 6; ++c)
        CHECK(model.mean(kForegroundBase)[c] == doctest::Approx(expected[c]).epsilon(1e-12));
    for (std::size_t k = 0; k < kComponents; ++k)
        CHECK(std::abs(norm(model.mean(k)) - 1.0) < 1e-6);
    CHECK(model.kappa() == 30.0);
    CHECK(model.lambda() == 0.1);
}

TEST_CASE("init_from_first_frame rejects one-class masks")
{
    Rng rng(4);
    const auto f = testing::random_directional(3, {2, 2}, rng);
    CHECK_THROWS_WITH_AS(init_from_first_frame(f, SoftMask({2, 2}, 1.0), {}),
                         "first-frame mask must contain both classes", Error);
    CHECK_THROWS_WITH_AS(init_from_first_frame(f, SoftMask({2, 2}, 0.2), {}),
                         "first-frame mask must contain both classes", Error);
}

TEST_CASE("init_from_first_frame 2x2 hand case")
{
    const auto f = grid2d({2, 2}, {{1, 0}, {0.6, 0.8}, {0, 1}, {-0.6, 0.8}});
    const SoftMask m0({2, 2}, std::vector<double>{1, 1, 0, 0});
    const auto model = init_from_first_frame(f, m0, {1.0, 0.5});
    check_vec(model.mean(0), {-0.316227766016838, 0.948683298050514}, 1e-6);
    check_vec(model.mean(1), {0.894427190999916, 0.447213595499958}, 1e-6);
    check_vec(model.mean(2), {-0.248173618263079, 0.968715569813045}, 1e-6);
    check_vec(model.mean(3), {0.820300230845467, 0.571933152802733}, 1e-6);

    const std::array<std::size_t, 2> pair{0, 1};
    const auto labels = supplementary_soft_labels(
        base_soft_labels(m0), component_posteriors(component_scores(f, model), pair));
    const std::array<double, 4> a2{0, 0, 0.377195345455969, 0.24461006105531};
    const std::array<double, 4> a3{0.229585184372092, 0.419404802131498, 0, 0};
    for (std::size_t l = 0; l < 4; ++l) {
        CHECK(std::abs(labels.at(l, 2) - a2[l]) < 1e-9);
        CHECK(std::abs(labels.at(l, 3) - a3[l]) < 1e-9);
    }

    SUBCASE("one update step")
    {
        const auto frame = grid2d({2, 2}, {{0.8, 0.6}, {1, 0}, {-0.28, 0.96}, {0, 1}});
        const SoftMask y({2, 2}, std::vector<double>{0.9, 0.7, 0.2, 0.1});
        const auto next = update_model(model, frame, y);
        check_vec(next.mean(0), {-0.115599396553372, 0.993295917396471}, 1e-6);
        check_vec(next.mean(1), {0.874843769358892, 0.484405180828948}, 1e-6);
        check_vec(next.mean(2), {-0.129783073162439, 0.991542411559139}, 1e-6);
        check_vec(next.mean(3), {0.810271649817126, 0.586054479978298}, 1e-6);
    }
}

TEST_CASE("update_model endpoints")
{
    Rng rng(5);
    const auto f0 = testing::random_directional(8, {5, 5}, rng);
    const auto f1 = testing::random_directional(8, {5, 5}, rng);
    const SoftMask m0 = testing::random_hard_mask({5, 5}, rng);
    const SoftMask y = testing::random_soft_mask({5, 5}, rng);

    const auto frozen = init_from_first_frame(f0, m0, {30.0, 0.0});
    CHECK(update_model(frozen, f1, y) == frozen);

    const auto jump = init_from_first_frame(f0, m0, {30.0, 1.0});
    const auto next = update_model(jump, f1, y);
    const auto labels = base_soft_labels(y);
    CHECK(next.mean(0) == *estimate_mean_direction(f1, labels.weights(0)));
    CHECK(next.mean(1) == *estimate_mean_direction(f1, labels.weights(1)));

    // 2-D: prev (1,0), estimate (0,1) for the foreground base pair
    const auto hand = model_2d({1, 0}, 1.0, 0.5);
    const auto up = grid2d({1, 1}, {{0, 1}});
    const auto after = update_model(hand, up, SoftMask({1, 1}, 1.0));
    check_vec(after.mean(1), {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}, 1e-9);
    // background weight is zero there, so its estimate is degenerate
    CHECK(after.mean(0) == std::vector<double>{1.0, 0.0});
}

TEST_CASE("update_model keeps means on the sphere")
{
    Rng rng(6);
    const GridShape shape{4, 6};
    const auto f0 = testing::random_directional(10, shape, rng);
    auto model = init_from_first_frame(f0, testing::random_hard_mask(shape, rng), {30.0, 0.3});
    for (int step = 0; step < 50; ++step) {
        model = update_model(model, testing::random_directional(10, shape, rng), testing::random_soft_mask(shape, rng));
        for (std::size_t k = 0; k < kComponents; ++k)
            CHECK(std::abs(norm(model.mean(k)) - 1.0) < 1e-6);
    }
}

TEST_CASE("AppearanceModel validation")
{
    const std::vector<double> u{1, 0};
    CHECK_THROWS_AS(AppearanceModel({u, u, u, std::vector<double>{1, 1}}, 1.0, 0.1), Error);
    CHECK_THROWS_AS(AppearanceModel({u, u, u, u}, 0.0, 0.1), Error);
    CHECK_THROWS_AS(AppearanceModel({u, u, u, u}, 1.0, 1.5), Error);
}

TEST_CASE("sample_vmf contract")
{
    std::vector<double> mu(64, 0.0);
    mu[3] = 1.0;
    const auto a = sample_vmf(mu, 30.0, 500, 11);
    const auto b = sample_vmf(mu, 30.0, 500, 11);
    CHECK(a == b);
    for (const auto& s : a)
        CHECK(std::abs(norm(s) - 1.0) < 1e-6);

    std::vector<double> mu16(16, 0.0);
    mu16[0] = 1.0;
    for (const auto& s : sample_vmf(mu16, 1e6, 2000, 12))
        CHECK(angle_degrees(s, mu16) < 0.5);

    const std::vector<double> one{1.0};
    for (const auto& s : sample_vmf(one, 5.0, 100, 1))
        CHECK(std::abs(s[0]) == 1.0);

    CHECK_THROWS_AS(sample_vmf(mu, 0.0, 1, 1), Error);
    CHECK_THROWS_AS(sample_vmf(mu, 1.0, 0, 1), Error);
}

TEST_CASE("sample_vmf mean direction and mean resultant length")
{
    Rng rng(13);
    std::vector<double> mu(64);
    for (double& x : mu)
        x = rng.normal();
    const double n = norm(mu);
    for (double& x : mu)
        x /= n;
    const auto samples = sample_vmf(mu, 30.0, 100000, 14);
    const auto est = estimate_mean_direction(samples);
    REQUIRE(est.has_value());
    CHECK(angle_degrees(*est, mu) < 1.0);

    // E[mu . x] = I_{p/2}(k) / I_{p/2-1}(k); for p = 64, k = 30 the continued
    // fraction below converges fast
    const double p = 64.0, kappa = 30.0;
    double frac = 0.0;
    for (int j = 200; j >= 1; --j) {
        const double nu = p / 2.0 - 1.0 + j;
        frac = 1.0 / (2.0 * nu / kappa + frac);
    }
    double mean_dot = 0.0;
    for (const auto& s : samples) {
        double d = 0.0;
        for (std::size_t c = 0; c < 64; ++c)
            d += s[c] * mu[c];
        mean_dot += d;
    }
    mean_dot /= double(samples.size());
    CHECK(mean_dot == doctest::Approx(frac).epsilon(5e-3));
}
