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
#ifndef DIRSEG_METRICS_HPP
#define DIRSEG_METRICS_HPP

#include "dirseg/grid.hpp"

#include <cstddef>

namespace dirseg {

/// Intersection over union; 1 when both masks are empty.
double jaccard(const BinaryMask& pred, const BinaryMask& gt);

/// Foreground pixels with at least one background 4-neighbour; pixels outside
/// the grid count as background, so a nonempty mask always has a boundary.
BinaryMask boundary_pixels(const BinaryMask& mask);

/// Contour F-measure: a boundary pixel counts as matched when a boundary pixel
/// of the other mask lies within Euclidean distance `radius`. 1 when both
/// boundaries are empty, 0 when exactly one is.
double boundary_f(const BinaryMask& pred, const BinaryMask& gt, double radius);

/// ceil(0.008 * diagonal), at least 1.
double default_boundary_radius(GridShape shape);

}  // namespace dirseg

#endif  // DIRSEG_METRICS_HPP
