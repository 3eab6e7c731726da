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

#include "scnforge/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scnforge/error.h"

namespace scnforge {
namespace {

constexpr double kMinTangentSq = 1e-12;

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
    0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
    0.2369268850561891, 0.2369268850561891};

double WrapAngle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

double DirectionAngle(Point2 v) { return WrapAngle(std::atan2(v.y, v.x)); }

double Poly(const std::array<double, 4>& a, double mu) {
  return a[0] + mu * (a[1] + mu * (a[2] + mu * a[3]));
}
double PolyD1(const std::array<double, 4>& a, double mu) {
  return a[1] + mu * (2.0 * a[2] + 3.0 * mu * a[3]);
}
double PolyD2(const std::array<double, 4>& a, double mu) {
  return 2.0 * a[2] + 6.0 * mu * a[3];
}

double Speed(const SplineSegment& seg, double mu) {
  return std::hypot(PolyD1(seg.ax, mu), PolyD1(seg.ay, mu));
}

// Arc length of `seg` over [mu0, mu1].
double ArcLength(const SplineSegment& seg, double mu0, double mu1) {
  const double half = 0.5 * (mu1 - mu0);
  const double mid = 0.5 * (mu1 + mu0);
  double sum = 0.0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
    sum += kGaussWeights[k] * Speed(seg, mid + half * kGaussNodes[k]);
  }
  return half * sum;
}

// Solves the tridiagonal system sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1]
// = rhs[i] in place (Thomas algorithm). Result is written to rhs.
void SolveTridiagonal(std::vector<double> sub, std::vector<double> diag,
                      std::vector<double> sup, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(diag[i - 1]) < 1e-14) {
      throw Error(ErrorCode::kInternal, "singular spline system");
    }
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  if (std::abs(diag[n - 1]) < 1e-14) {
    throw Error(ErrorCode::kInternal, "singular spline system");
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
  }
}

void CheckSegmentArgs(const SplineChain& chain, std::size_t segment_index,
                      double mu) {
  if (segment_index >= chain.segments.size()) {
    throw Error(
        ErrorCode::kInvalidInput,
        "segment index " + std::to_string(segment_index) + " out of range");
  }
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "mu outside [0, 1]");
  }
}

}  // namespace

double Norm(Point2 a) { return std::hypot(a.x, a.y); }
double Distance(Point2 a, Point2 b) { return Norm(a - b); }

void CheckSupportSequence(std::span<const Point2> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      throw Error(ErrorCode::kInvalidInput,
                  "non-finite coordinate at point " + std::to_string(i));
    }
    if (i > 0 && Distance(points[i - 1], points[i]) <= kMinPointSpacing) {
      throw Error(ErrorCode::kInvalidInput,
                  "duplicate consecutive points at index " + std::to_string(i));
    }
  }
}

Headings HeadingFromNeighbors(std::span<const Point2> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::kInvalidInput,
                "heading needs at least 2 points, got " +
                    std::to_string(points.size()));
  }
  const std::size_t n = points.size();
  return {DirectionAngle(points[1] - points[0]),
          DirectionAngle(points[n - 1] - points[n - 2])};
}

SplineChain FitSpline(std::span<const Point2> points, double theta_start,
                      double theta_end) {
  if (points.size() < 3) {
    throw Error(ErrorCode::kInvalidInput,
                "spline fit needs at least 3 support points, got " +
                    std::to_string(points.size()));
  }
  if (!std::isfinite(theta_start) || !std::isfinite(theta_end)) {
    throw Error(ErrorCode::kInvalidInput, "non-finite end heading");
  }
  CheckSupportSequence(points);

  const std::size_t n = points.size();
  SplineChain chain;
  chain.theta_start = theta_start;
  chain.theta_end = theta_end;
  chain.chord_lengths.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    chain.chord_lengths[i] = Distance(points[i], points[i + 1]);
  }

  // Unknowns are the mu-derivatives D_i at each support point. Sharing D_i
  // between neighbouring segments gives C1; matching second derivatives at
  // interior joints yields D_{i-1} + 4 D_i + D_{i+1} = 3 (P_{i+1} - P_{i-1}).
  // The end derivatives are fixed by heading and chord length.
  const Point2 d_first = chain.chord_lengths.front() *
                         Point2{std::cos(theta_start), std::sin(theta_start)};
  const Point2 d_last = chain.chord_lengths.back() *
                        Point2{std::cos(theta_end), std::sin(theta_end)};

  std::vector<Point2> d(n);
  d.front() = d_first;
  d.back() = d_last;

  const std::size_t m = n - 2;
  std::vector<double> sub(m, 1.0), diag(m, 4.0), sup(m, 1.0);
  std::vector<double> rx(m), ry(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    rx[k] = 3.0 * (points[i + 1].x - points[i - 1].x);
    ry[k] = 3.0 * (points[i + 1].y - points[i - 1].y);
  }
  rx.front() -= d_first.x;
  ry.front() -= d_first.y;
  rx.back() -= d_last.x;
  ry.back() -= d_last.y;
  SolveTridiagonal(sub, diag, sup, rx);
  SolveTridiagonal(sub, diag, sup, ry);
  for (std::size_t k = 0; k < m; ++k) d[k + 1] = {rx[k], ry[k]};

  chain.segments.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto coeffs = [&](double p0, double p1, double d0, double d1) {
      return std::array<double, 4>{p0, d0, 3.0 * (p1 - p0) - 2.0 * d0 - d1,
                                   2.0 * (p0 - p1) + d0 + d1};
    };
    chain.segments[i].ax =
        coeffs(points[i].x, points[i + 1].x, d[i].x, d[i + 1].x);
    chain.segments[i].ay =
        coeffs(points[i].y, points[i + 1].y, d[i].y, d[i + 1].y);
  }
  return chain;
}

SplineSample EvalSpline(const SplineChain& chain, std::size_t segment_index,
                        double mu) {
  CheckSegmentArgs(chain, segment_index, mu);
  const SplineSegment& seg = chain.segments[segment_index];
  return {{Poly(seg.ax, mu), Poly(seg.ay, mu)},
          {PolyD1(seg.ax, mu), PolyD1(seg.ay, mu)},
          {PolyD2(seg.ax, mu), PolyD2(seg.ay, mu)}};
}

double CurvatureAt(const SplineChain& chain, std::size_t segment_index,
                   double mu) {
  const SplineSample q = EvalSpline(chain, segment_index, mu);
  const double speed_sq = Dot(q.d1, q.d1);
  if (speed_sq < kMinTangentSq) {
    throw Error(
        ErrorCode::kDegenerateGeometry,
        "vanishing tangent in segment " + std::to_string(segment_index));
  }
  return Cross(q.d1, q.d2) / (speed_sq * std::sqrt(speed_sq));
}

SampledPath SamplePath(const SplineChain& chain, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::kInvalidInput, "sampling step must be positive");
  }
  if (chain.segments.empty()) {
    throw Error(ErrorCode::kInvalidInput, "empty spline chain");
  }

  // Cumulative arc length at mu = j / kArcLengthSubsamples of every segment.
  const std::size_t nseg = chain.segments.size();
  const int sub = kArcLengthSubsamples;
  std::vector<double> table(nseg * sub + 1, 0.0);
  for (std::size_t i = 0; i < nseg; ++i) {
    for (int j = 0; j < sub; ++j) {
      const std::size_t k = i * sub + j;
      table[k + 1] =
          table[k] + ArcLength(chain.segments[i], static_cast<double>(j) / sub,
                               static_cast<double>(j + 1) / sub);
    }
  }
  const double total = table.back();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kDegenerateGeometry, "zero-length path");
  }

  const auto intervals =
      static_cast<std::size_t>(std::max(1.0, std::round(total / step)));
  const double spacing = total / static_cast<double>(intervals);

  SampledPath path;
  path.s.reserve(intervals + 1);
  std::size_t cell = 0;
  for (std::size_t k = 0; k <= intervals; ++k) {
    std::size_t seg_index = 0;
    double mu = 0.0;
    double s_target = spacing * static_cast<double>(k);
    if (k == intervals) {
      seg_index = nseg - 1;
      mu = 1.0;
      s_target = total;
    } else if (k > 0) {
      while (cell + 1 < table.size() - 1 && table[cell + 1] <= s_target) {
        ++cell;
      }
      seg_index = cell / sub;
      const double mu_lo = static_cast<double>(cell % sub) / sub;
      const double mu_hi = mu_lo + 1.0 / sub;
      const SplineSegment& seg = chain.segments[seg_index];
      const double s_lo = table[cell];
      const double width = table[cell + 1] - s_lo;
      mu = width > 0.0 ? mu_lo + (s_target - s_lo) / width / sub : mu_lo;
      // Newton refinement on s(mu) = s_lo + arc(mu_lo, mu), kept in bracket.
      for (int it = 0; it < 4; ++it) {
        const double speed = Speed(seg, mu);
        if (speed <= 0.0) break;
        const double f = s_lo + ArcLength(seg, mu_lo, mu) - s_target;
        mu = std::clamp(mu - f / speed, mu_lo, mu_hi);
      }
    }
    const SplineSample q = EvalSpline(chain, seg_index, mu);
    path.s.push_back(s_target);
    path.pts.push_back(q.point);
    path.theta.push_back(DirectionAngle(q.d1));
    path.kappa.push_back(CurvatureAt(chain, seg_index, mu));
  }
  return path;
}

}  // namespace scnforge
