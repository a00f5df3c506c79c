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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dirseg {

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

std::optional<std::vector<double>> normalized(std::vector<double> v)
{
    const double n = norm(v);
    if (!(n >= kDegenerateNorm))
        return std::nullopt;
    for (double& x : v)
        x /= n;
    return v;
}

constexpr std::array<std::size_t, 2> kBasePair{kBackgroundBase, kForegroundBase};

// Exponential moving average on the sphere. The endpoints are exact so that
// lambda = 0 is bit-for-bit the identity and lambda = 1 adopts the estimate.
std::vector<double> blend(const std::vector<double>& previous, const std::optional<std::vector<double>>& estimate,
                          double lambda)
{
    if (!estimate || lambda == 0.0)
        return previous;
    if (lambda == 1.0)
        return *estimate;
    std::vector<double> mixed(previous.size());
    for (std::size_t c = 0; c < mixed.size(); ++c)
        mixed[c] = (1.0 - lambda) * previous[c] + lambda * (*estimate)[c];
    // antipodal previous/estimate at lambda = 0.5 cancels; keep the previous mean
    return normalized(std::move(mixed)).value_or(previous);
}

void check_shape(const DirectionalFeatureMap& features, GridShape shape)
{
    if (features.shape() != shape)
        throw Error("shape mismatch: features " + to_string(features.shape()) + ", labels " + to_string(shape));
}

}  // namespace

AppearanceModel::AppearanceModel(std::array<std::vector<double>, kComponents> means, double kappa, double lambda)
    : means_(std::move(means)), kappa_(kappa), lambda_(lambda)
{
    if (!(kappa_ > 0.0) || !std::isfinite(kappa_))
        throw Error("kappa must be positive");
    if (!(lambda_ >= 0.0 && lambda_ <= 1.0))
        throw Error("lambda must lie in [0, 1]");
    for (const auto& mu : means_) {
        if (mu.empty() || mu.size() != means_[0].size())
            throw Error("component means must share a nonzero dimension");
        if (std::abs(norm(mu) - 1.0) > 1e-6)
            throw Error("component mean is not unit length");
    }
}

CueMap ScoreField::channel(std::size_t k) const
{
    CueMap out(shape_);
    for (std::size_t l = 0; l < out.size(); ++l)
        out[l] = at(l, k);
    return out;
}

Grid<double> SoftLabelField::weights(std::size_t k) const
{
    Grid<double> out(shape_);
    for (std::size_t l = 0; l < out.size(); ++l)
        out[l] = at(l, k);
    return out;
}

std::optional<std::vector<double>> estimate_mean_direction(const DirectionalFeatureMap& features,
                                                           const Grid<double>& weights)
{
    check_shape(features, weights.shape());
    const std::size_t n = features.pixels();
    const auto src = features.values();
    std::vector<double> sum(features.channels(), 0.0);
    for (std::size_t c = 0; c < sum.size(); ++c) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l)
            s += weights[l] * src[c * n + l];
        sum[c] = s;
    }
    return normalized(std::move(sum));
}

std::optional<std::vector<double>> estimate_mean_direction(std::span<const std::vector<double>> samples)
{
    if (samples.empty())
        return std::nullopt;
    std::vector<double> sum(samples.front().size(), 0.0);
    for (const auto& r : samples)
        for (std::size_t c = 0; c < sum.size(); ++c)
            sum[c] += r[c];
    return normalized(std::move(sum));
}

ScoreField component_scores(const DirectionalFeatureMap& features, const AppearanceModel& model)
{
    if (features.channels() != model.channels())
        throw Error("channel mismatch between features and appearance model");
    const std::size_t n = features.pixels();
    const auto src = features.values();
    ScoreField scores(features.shape());
    for (std::size_t k = 0; k < kComponents; ++k) {
        const auto& mu = model.mean(k);
        for (std::size_t l = 0; l < n; ++l) {
            double s = 0.0;
            for (std::size_t c = 0; c < mu.size(); ++c)
                s += mu[c] * src[c * n + l];
            scores.at(l, k) = model.kappa() * s;
        }
    }
    return scores;
}

PosteriorField component_posteriors(const ScoreField& scores, std::span<const std::size_t> subset)
{
    if (subset.empty())
        throw Error("posterior subset must be nonempty");
    for (std::size_t k : subset) {
        if (k >= kComponents)
            throw Error("component index out of range");
    }
    PosteriorField post(scores.shape(), subset.size());
    for (std::size_t l = 0; l < scores.shape().size(); ++l) {
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t k : subset)
            hi = std::max(hi, scores.at(l, k));
        double total = 0.0;
        for (std::size_t j = 0; j < subset.size(); ++j) {
            post.at(l, j) = std::exp(scores.at(l, subset[j]) - hi);
            total += post.at(l, j);
        }
        for (std::size_t j = 0; j < subset.size(); ++j)
            post.at(l, j) /= total;
    }
    return post;
}

SoftLabelField base_soft_labels(const SoftMask& y)
{
    SoftLabelField labels(y.shape());
    for (std::size_t l = 0; l < y.size(); ++l) {
        labels.at(l, kBackgroundBase) = 1.0 - y[l];
        labels.at(l, kForegroundBase) = y[l];
    }
    return labels;
}

SoftLabelField supplementary_soft_labels(SoftLabelField labels, const PosteriorField& base_posteriors)
{
    if (base_posteriors.shape() != labels.shape() || base_posteriors.columns() != 2)
        throw Error("supplementary labels need base-pair posteriors of the same shape");
    for (std::size_t l = 0; l < labels.shape().size(); ++l) {
        labels.at(l, kBackgroundSupplementary) =
            std::max(0.0, labels.at(l, kBackgroundBase) - base_posteriors.at(l, 0));
        labels.at(l, kForegroundSupplementary) =
            std::max(0.0, labels.at(l, kForegroundBase) - base_posteriors.at(l, 1));
    }
    return labels;
}

namespace {

PosteriorField base_posteriors(const DirectionalFeatureMap& features,
                               const std::array<std::vector<double>, kComponents>& means, double kappa)
{
    // the supplementary means are irrelevant here; reuse the base pair so the
    // temporary model is valid
    const AppearanceModel base({means[0], means[1], means[0], means[1]}, kappa, 0.0);
    return component_posteriors(component_scores(features, base), kBasePair);
}

}  // namespace

AppearanceModel init_from_first_frame(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                      const AppearanceConfig& config)
{
    check_shape(first, first_mask.shape());
    const BinaryMask hard = binarize(first_mask);
    const auto fg_count = std::count(hard.values().begin(), hard.values().end(), std::uint8_t{1});
    if (fg_count == 0 || static_cast<std::size_t>(fg_count) == hard.size())
        throw Error("first-frame mask must contain both classes");

    SoftLabelField labels = base_soft_labels(to_soft(hard));
    const auto mu0 = estimate_mean_direction(first, labels.weights(kBackgroundBase));
    const auto mu1 = estimate_mean_direction(first, labels.weights(kForegroundBase));
    if (!mu0 || !mu1)
        throw Error("first-frame base component is degenerate");

    std::array<std::vector<double>, kComponents> means{*mu0, *mu1, *mu0, *mu1};
    labels = supplementary_soft_labels(std::move(labels), base_posteriors(first, means, config.kappa));
    means[kBackgroundSupplementary] =
        estimate_mean_direction(first, labels.weights(kBackgroundSupplementary)).value_or(*mu0);
    means[kForegroundSupplementary] =
        estimate_mean_direction(first, labels.weights(kForegroundSupplementary)).value_or(*mu1);
    return AppearanceModel(std::move(means), config.kappa, config.lambda);
}

AppearanceModel update_model(const AppearanceModel& model, const DirectionalFeatureMap& frame, const SoftMask& y)
{
    check_shape(frame, y.shape());
    if (frame.channels() != model.channels())
        throw Error("channel mismatch between features and appearance model");

    const double lambda = model.lambda();
    auto means = model.means();

    SoftLabelField labels = base_soft_labels(y);
    for (std::size_t k : kBasePair)
        means[k] = blend(means[k], estimate_mean_direction(frame, labels.weights(k)), lambda);

    labels = supplementary_soft_labels(std::move(labels), base_posteriors(frame, means, model.kappa()));
    for (std::size_t k : {kBackgroundSupplementary, kForegroundSupplementary})
        means[k] = blend(means[k], estimate_mean_direction(frame, labels.weights(k)), lambda);

    return AppearanceModel(std::move(means), model.kappa(), lambda);
}

std::vector<double> sample_vmf(std::span<const double> mu, double kappa, Rng& rng)
{
    const std::size_t dim = mu.size();
    if (dim == 0)
        throw Error("vMF mean direction must be nonempty");
    if (!(kappa > 0.0))
        throw Error("kappa must be positive");
    const double mu_norm = norm(mu);
    if (!(mu_norm >= kDegenerateNorm))
        throw Error("vMF mean direction must be nonzero");

    std::vector<double> out(dim);
    if (dim == 1) {
        // S^0 = {-1, +1}; P(+1) = e^k / (e^k + e^-k)
        const double sign = rng.uniform() < 1.0 / (1.0 + std::exp(-2.0 * kappa)) ? 1.0 : -1.0;
        out[0] = sign * (mu[0] > 0.0 ? 1.0 : -1.0);
        return out;
    }

    const double m = static_cast<double>(dim - 1);
    // stable form of (-2k + sqrt(4k^2 + m^2)) / m
    const double b = m / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m * m));
    const double x0 = (1.0 - b) / (1.0 + b);
    const double one_minus_x0_sq = 4.0 * b / ((1.0 + b) * (1.0 + b));
    const double c = kappa * x0 + m * std::log(one_minus_x0_sq);

    double w = 0.0;
    for (;;) {
        const double z = rng.beta(0.5 * m, 0.5 * m);
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        const double u = 1.0 - rng.uniform();
        if (kappa * w + m * std::log(1.0 - x0 * w) - c >= std::log(u))
            break;
    }

    // uniform tangent direction: gaussian with the mu component projected out
    std::vector<double> v(dim);
    double vn = 0.0;
    do {
        for (double& x : v)
            x = rng.normal();
        const double along = dot(v, mu) / (mu_norm * mu_norm);
        for (std::size_t i = 0; i < dim; ++i)
            v[i] -= along * mu[i];
        vn = norm(v);
    } while (vn < 1e-12);

    const double tangent = std::sqrt(std::max(0.0, 1.0 - w * w));
    for (std::size_t i = 0; i < dim; ++i)
        out[i] = w * mu[i] / mu_norm + tangent * v[i] / vn;
    const double on = norm(out);
    for (double& x : out)
        x /= on;
    return out;
}

std::vector<std::vector<double>> sample_vmf(std::span<const double> mu, double kappa, std::size_t n,
                                            std::uint64_t seed)
{
    if (n == 0)
        throw Error("sample count must be at least 1");
    Rng rng(seed);
    std::vector<std::vector<double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(sample_vmf(mu, kappa, rng));
    return out;
}

double angle_degrees(std::span<const double> a, std::span<const double> b)
{
    const double cosine = std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0);
    return std::acos(cosine) * 180.0 / std::numbers::pi;
}

}  // namespace dirseg
