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
#ifndef DIRSEG_APPEARANCE_HPP
#define DIRSEG_APPEARANCE_HPP

#include "dirseg/directional.hpp"
#include "dirseg/grid.hpp"
#include "dirseg/random.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dirseg {

// Online von Mises-Fisher mixture appearance model.
//
// Four components share one concentration kappa, which cancels the vMF
// normaliser out of every posterior:
//
//   0  background, base           2  background, supplementary
//   1  foreground, base           3  foreground, supplementary
//
// The supplementary pair is fit to the mass the base pair gets wrong.

inline constexpr std::size_t kComponents = 4;

enum Component : std::size_t {
    kBackgroundBase = 0,
    kForegroundBase = 1,
    kBackgroundSupplementary = 2,
    kForegroundSupplementary = 3,
};

inline constexpr double kDegenerateNorm = 1e-9;

struct AppearanceConfig {
    double kappa = 30.0;
    double lambda = 0.1;
};

class AppearanceModel {
public:
    /// Throws Error unless every mean is unit length (1e-6), kappa > 0 and
    /// lambda is in [0, 1].
    AppearanceModel(std::array<std::vector<double>, kComponents> means, double kappa, double lambda);

    const std::vector<double>& mean(std::size_t k) const { return means_[k]; }
    const std::array<std::vector<double>, kComponents>& means() const { return means_; }
    double kappa() const { return kappa_; }
    double lambda() const { return lambda_; }
    std::size_t channels() const { return means_[0].size(); }

    friend bool operator==(const AppearanceModel&, const AppearanceModel&) = default;

private:
    std::array<std::vector<double>, kComponents> means_;
    double kappa_;
    double lambda_;
};

/// s(l, k) = kappa * <mu_k, r_l>, pixel-major with 4 values per pixel.
class ScoreField {
public:
    explicit ScoreField(GridShape shape) : shape_(shape), data_(shape.size() * kComponents, 0.0) {}

    GridShape shape() const { return shape_; }
    double& at(std::size_t l, std::size_t k) { return data_[l * kComponents + k]; }
    double at(std::size_t l, std::size_t k) const { return data_[l * kComponents + k]; }
    /// Component k as an H x W map.
    CueMap channel(std::size_t k) const;

private:
    GridShape shape_;
    std::vector<double> data_;
};

/// Posterior probabilities over a subset of components; column j corresponds
/// to the j-th entry of the subset.
class PosteriorField {
public:
    PosteriorField(GridShape shape, std::size_t columns)
        : shape_(shape), columns_(columns), data_(shape.size() * columns, 0.0) {}

    GridShape shape() const { return shape_; }
    std::size_t columns() const { return columns_; }
    double& at(std::size_t l, std::size_t j) { return data_[l * columns_ + j]; }
    double at(std::size_t l, std::size_t j) const { return data_[l * columns_ + j]; }

private:
    GridShape shape_;
    std::size_t columns_;
    std::vector<double> data_;
};

/// Per-pixel responsibilities alpha(l, k).
class SoftLabelField {
public:
    explicit SoftLabelField(GridShape shape) : shape_(shape), data_(shape.size() * kComponents, 0.0) {}

    GridShape shape() const { return shape_; }
    double& at(std::size_t l, std::size_t k) { return data_[l * kComponents + k]; }
    double at(std::size_t l, std::size_t k) const { return data_[l * kComponents + k]; }
    /// Column k as an H x W weight map.
    Grid<double> weights(std::size_t k) const;

private:
    GridShape shape_;
    std::vector<double> data_;
};

/// Normalised weighted sum of the feature vectors, the maximum-likelihood
/// mean direction. std::nullopt when the sum is shorter than kDegenerateNorm.
std::optional<std::vector<double>> estimate_mean_direction(const DirectionalFeatureMap& features,
                                                           const Grid<double>& weights);

std::optional<std::vector<double>> estimate_mean_direction(std::span<const std::vector<double>> samples);

ScoreField component_scores(const DirectionalFeatureMap& features, const AppearanceModel& model);

/// Softmax over `subset` at every pixel, max-subtracted.
PosteriorField component_posteriors(const ScoreField& scores, std::span<const std::size_t> subset);

/// alpha_1 = y, alpha_0 = 1 - y; supplementary columns are zero.
SoftLabelField base_soft_labels(const SoftMask& y);

/// Fills columns 2 and 3 from the base columns and base-only posteriors:
/// alpha_2 = max(0, alpha_0 - p0), alpha_3 = max(0, alpha_1 - p1).
SoftLabelField supplementary_soft_labels(SoftLabelField labels, const PosteriorField& base_posteriors);

/// Frame-0 model. The mask is hardened at 0.5. Throws
/// Error("first-frame mask must contain both classes") if either class is empty.
AppearanceModel init_from_first_frame(const DirectionalFeatureMap& first, const SoftMask& first_mask,
                                      const AppearanceConfig& config);

/// One online step driven by the predicted foreground probability y.
AppearanceModel update_model(const AppearanceModel& model, const DirectionalFeatureMap& frame, const SoftMask& y);

/// Wood's rejection sampler for vMF(mu, kappa) on the unit sphere in R^C.
std::vector<std::vector<double>> sample_vmf(std::span<const double> mu, double kappa, std::size_t n,
                                            std::uint64_t seed);

/// Single draw from a caller-owned stream.
std::vector<double> sample_vmf(std::span<const double> mu, double kappa, Rng& rng);

/// Angle between two nonzero vectors, in degrees.
double angle_degrees(std::span<const double> a, std::span<const double> b);

}  // namespace dirseg

#endif  // DIRSEG_APPEARANCE_HPP
