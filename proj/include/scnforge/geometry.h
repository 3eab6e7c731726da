// Copyright 2026 The scnforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCNFORGE_GEOMETRY_H_
#define SCNFORGE_GEOMETRY_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace scnforge {

// Planar point or vector in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double k, Point2 a) { return {k * a.x, k * a.y}; }
inline double Dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double Cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double Norm(Point2 a);
double Distance(Point2 a, Point2 b);

// Consecutive support points closer than this are treated as duplicates.
inline constexpr double kMinPointSpacing = 1e-9;
inline constexpr double kDefaultSamplingStep = 0.5;
// Sub-intervals per segment used to tabulate arc length.
inline constexpr int kArcLengthSubsamples = 50;

// Cubic pair over the virtual parameter mu in [0, 1]:
//   x(mu) = ax[0] + ax[1] mu + ax[2] mu^2 + ax[3] mu^3, likewise y.
struct SplineSegment {
  std::array<double, 4> ax{};
  std::array<double, 4> ay{};
};

struct SplineChain {
  std::vector<SplineSegment> segments;
  double theta_start = 0.0;
  double theta_end = 0.0;
  // Euclidean chord length of each segment; the boundary tangent magnitudes
  // are taken from the first and last entry.
  std::vector<double> chord_lengths;
};

struct SplineSample {
  Point2 point;
  Point2 d1;  // d/dmu
  Point2 d2;  // d^2/dmu^2
};

struct Headings {
  double start = 0.0;
  double end = 0.0;
};

// Discretized path. All arrays have the same length.
struct SampledPath {
  std::vector<double> s;
  std::vector<Point2> pts;
  std::vector<double> theta;
  std::vector<double> kappa;

  std::size_t size() const { return s.size(); }
  double length() const { return s.empty() ? 0.0 : s.back(); }
};

// Throws kInvalidInput if any coordinate is non-finite or two consecutive
// points coincide.
void CheckSupportSequence(std::span<const Point2> points);

// Direction angles of the first and last chord, in (-pi, pi].
Headings HeadingFromNeighbors(std::span<const Point2> points);

// Fits a C2 cubic chain through all points with the given end headings.
// Boundary tangent magnitudes equal the chord length of the end segment.
// Requires at least three points.
SplineChain FitSpline(std::span<const Point2> points, double theta_start,
                      double theta_end);

SplineSample EvalSpline(const SplineChain& chain, std::size_t segment_index,
                        double mu);

// Signed curvature, positive for left turns.
double CurvatureAt(const SplineChain& chain, std::size_t segment_index,
                   double mu);

// Stations at (nearly) uniform arc-length spacing close to `step`, including
// both path endpoints.
SampledPath SamplePath(const SplineChain& chain,
                       double step = kDefaultSamplingStep);

}  // namespace scnforge

#endif  // SCNFORGE_GEOMETRY_H_
