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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "scnforge/error.h"
#include "spline_oracle.h"
#include "test_util.h"

namespace scnforge {
namespace {

using testing_util::AngleError;
using testing_util::CircleArc;
using testing_util::DensePolylineLength;
using testing_util::RandomSupport;
using testing_util::SolveSplineDense;

constexpr double kPi = std::numbers::pi;

SplineChain FitWithChordHeadings(const std::vector<Point2>& pts) {
  const Headings h = HeadingFromNeighbors(pts);
  return FitSpline(pts, h.start, h.end);
}

TEST(HeadingFromNeighborsTest, AxisAligned) {
  const std::vector<Point2> two = {{0, 0}, {1, 0}};
  Headings h = HeadingFromNeighbors(two);
  EXPECT_DOUBLE_EQ(h.start, 0.0);
  EXPECT_DOUBLE_EQ(h.end, 0.0);

  const std::vector<Point2> three = {{0, 0}, {0, 2}, {-1, 2}};
  h = HeadingFromNeighbors(three);
  EXPECT_DOUBLE_EQ(h.start, kPi / 2);
  EXPECT_DOUBLE_EQ(h.end, kPi);
}

TEST(HeadingFromNeighborsTest, Diagonal) {
  const std::vector<Point2> pts = {{0, 0}, {1, 1}, {2, 3}};
  const Headings h = HeadingFromNeighbors(pts);
  EXPECT_NEAR(h.start, 0.7853981633974483, 1e-15);
  EXPECT_NEAR(h.end, 1.1071487177940904, 1e-15);
}

TEST(HeadingFromNeighborsTest, BackwardsIsPiNotMinusPi) {
  const std::vector<Point2> pts = {{0, -0.0}, {-1, -0.0}};
  EXPECT_DOUBLE_EQ(HeadingFromNeighbors(pts).start, kPi);
}

TEST(HeadingFromNeighborsTest, RejectsSinglePoint) {
  const std::vector<Point2> one = {{0, 0}};
  try {
    HeadingFromNeighbors(one);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(FitSplineTest, RejectsShortAndDuplicateSequences) {
  const std::vector<Point2> two = {{0, 0}, {1, 0}};
  EXPECT_THROW(FitSpline(two, 0, 0), Error);
  const std::vector<Point2> dup = {{0, 0}, {1, 0}, {1, 0}, {2, 0}};
  try {
    FitSpline(dup, 0, 0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
  const std::vector<Point2> ok = {{0, 0}, {1, 0}, {2, 0}};
  EXPECT_THROW(FitSpline(ok, NAN, 0), Error);
}

TEST(FitSplineTest, CollinearPointsGiveStraightLine) {
  const std::vector<Point2> pts = {{0, 0}, {1, 0}, {2, 0}};
  const SplineChain chain = FitSpline(pts, 0.0, 0.0);
  ASSERT_EQ(chain.segments.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    for (double mu = 0.0; mu <= 1.0; mu += 0.125) {
      EXPECT_NEAR(EvalSpline(chain, i, mu).point.y, 0.0, 1e-12);
      EXPECT_NEAR(CurvatureAt(chain, i, mu), 0.0, 1e-9);
    }
  }
}

TEST(FitSplineTest, ChordLengthsStored) {
  const std::vector<Point2> pts = {{0, 0}, {3, 4}, {3, 5}};
  const SplineChain chain = FitWithChordHeadings(pts);
  ASSERT_EQ(chain.chord_lengths.size(), 2u);
  EXPECT_DOUBLE_EQ(chain.chord_lengths[0], 5.0);
  EXPECT_DOUBLE_EQ(chain.chord_lengths[1], 1.0);
}

TEST(FitSplineTest, MatchesDenseConstraintSolveOnThreePoints) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2> pts;
    while (pts.size() < 3) {
      Point2 p{coord(rng), coord(rng)};
      if (pts.empty() || Distance(pts.back(), p) > 1.0) pts.push_back(p);
    }
    const double ts = angle(rng), te = angle(rng);
    const SplineChain chain = FitSpline(pts, ts, te);
    const auto dense = SolveSplineDense(pts, ts, te);
    for (std::size_t i = 0; i < 2; ++i) {
      for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(chain.segments[i].ax[k], dense[i].ax[k], 1e-9);
        EXPECT_NEAR(chain.segments[i].ay[k], dense[i].ay[k], 1e-9);
      }
    }
  }
}

TEST(FitSplineTest, InterpolatesJoinsAndHeadingsOnRandomSequences) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<Point2> pts = RandomSupport(rng, 3 + trial % 15);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    const double ts = angle(rng), te = angle(rng);
    const SplineChain chain = FitSpline(pts, ts, te);
    const std::size_t n = chain.segments.size();
    for (std::size_t i = 0; i < n; ++i) {
      const SplineSample a = EvalSpline(chain, i, 0.0);
      const SplineSample b = EvalSpline(chain, i, 1.0);
      EXPECT_LT(Distance(a.point, pts[i]), 1e-9);
      EXPECT_LT(Distance(b.point, pts[i + 1]), 1e-9);
      if (i + 1 < n) {
        const SplineSample c = EvalSpline(chain, i + 1, 0.0);
        EXPECT_LT(Norm(b.d1 - c.d1), 1e-8);
        EXPECT_LT(Norm(b.d2 - c.d2), 1e-8);
      }
    }
    const Point2 d_start = EvalSpline(chain, 0, 0.0).d1;
    const Point2 d_end = EvalSpline(chain, n - 1, 1.0).d1;
    EXPECT_LT(AngleError(std::atan2(d_start.y, d_start.x), ts), 1e-8);
    EXPECT_LT(AngleError(std::atan2(d_end.y, d_end.x), te), 1e-8);
    EXPECT_NEAR(Norm(d_start), chain.chord_lengths.front(), 1e-9);
    EXPECT_NEAR(Norm(d_end), chain.chord_lengths.back(), 1e-9);
  }
}

TEST(EvalSplineTest, EndpointsAndStraightMidpoint) {
  const std::vector<Point2> pts = {{0, 0}, {4, 0}, {8, 0}, {12, 0}};
  const SplineChain chain = FitSpline(pts, 0.0, 0.0);
  const SplineSample first = EvalSpline(chain, 0, 0.0);
  EXPECT_EQ(first.point, pts[0]);
  EXPECT_NEAR(std::atan2(first.d1.y, first.d1.x), 0.0, 1e-12);
  EXPECT_LT(Distance(EvalSpline(chain, 2, 1.0).point, pts[3]), 1e-12);
  // Equal chords and aligned headings: the cubic degenerates to the chord.
  for (std::size_t i = 0; i < 3; ++i) {
    const Point2 mid = 0.5 * (pts[i] + pts[i + 1]);
    EXPECT_LT(Distance(EvalSpline(chain, i, 0.5).point, mid), 1e-12);
  }
}

TEST(EvalSplineTest, RejectsOutOfRangeArguments) {
  const std::vector<Point2> pts = {{0, 0}, {1, 0}, {2, 0}};
  const SplineChain chain = FitSpline(pts, 0.0, 0.0);
  EXPECT_THROW(EvalSpline(chain, 2, 0.5), Error);
  EXPECT_THROW(EvalSpline(chain, 0, -0.01), Error);
  EXPECT_THROW(EvalSpline(chain, 0, 1.01), Error);
  EXPECT_THROW(EvalSpline(chain, 0, NAN), Error);
}

TEST(CurvatureTest, QuarterCircleWithTangentHeadings) {
  constexpr double kRadius = 20.0;
  const SplineChain chain =
      FitSpline(CircleArc(kRadius, 9, kPi / 2), kPi / 2, kPi);
  const SampledPath path = SamplePath(chain, 0.5);
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    EXPECT_NEAR(path.kappa[i], 1.0 / kRadius, 0.02 / kRadius)
        << "station " << i << " s=" << path.s[i];
  }
}

TEST(CurvatureTest, ChordHeadingsFlattenTheEndSegments) {
  // A chord-aligned end tangent forces the first segment to leave p0 along
  // the chord, so the curvature there drops well below 1/R.
  constexpr double kRadius = 20.0;
  const SplineChain chain =
      FitWithChordHeadings(CircleArc(kRadius, 9, kPi / 2));
  EXPECT_LT(CurvatureAt(chain, 0, 0.0), 0.5 / kRadius);
  EXPECT_LT(CurvatureAt(chain, 7, 1.0), 0.5 / kRadius);
  // The boundary disturbance decays towards the middle of the chain.
  EXPECT_NEAR(CurvatureAt(chain, 3, 0.5), 1.0 / kRadius, 0.02 / kRadius);
}

TEST(CurvatureTest, MirroredPathNegatesCurvature) {
  std::vector<Point2> pts = CircleArc(20.0, 6, kPi / 3);
  std::vector<Point2> mirrored;
  for (const Point2& p : pts) mirrored.push_back({p.x, -p.y});
  const SplineChain a = FitWithChordHeadings(pts);
  const SplineChain b = FitWithChordHeadings(mirrored);
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    for (double mu : {0.0, 0.3, 0.7, 1.0}) {
      EXPECT_NEAR(CurvatureAt(a, i, mu), -CurvatureAt(b, i, mu), 1e-12);
    }
  }
  EXPECT_GT(CurvatureAt(a, 0, 0.5), 0.0);  // counter-clockwise arc
}

TEST(CurvatureTest, VanishingTangentIsDegenerate) {
  SplineChain chain;
  chain.segments.push_back({{1.0, 0.0, 0.0, 0.0}, {2.0, 0.0, 0.0, 0.0}});
  try {
    CurvatureAt(chain, 0, 0.5);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateGeometry);
  }
  EXPECT_THROW(SamplePath(chain, 0.5), Error);
}

TEST(SamplePathTest, StraightLineStations) {
  const std::vector<Point2> pts = {{0, 0}, {5, 0}, {10, 0}};
  const SampledPath path = SamplePath(FitSpline(pts, 0.0, 0.0), 0.5);
  ASSERT_EQ(path.size(), 21u);
  for (std::size_t i = 0; i < path.size(); ++i) {
    EXPECT_NEAR(path.s[i], 0.5 * static_cast<double>(i), 1e-9);
    EXPECT_NEAR(path.pts[i].x, 0.5 * static_cast<double>(i), 1e-9);
    EXPECT_NEAR(path.theta[i], 0.0, 1e-12);
  }
  EXPECT_EQ(path.s.front(), 0.0);
}

TEST(SamplePathTest, QuarterCircleLength) {
  const SplineChain chain =
      FitSpline(CircleArc(20.0, 9, kPi / 2), kPi / 2, kPi);
  const SampledPath path = SamplePath(chain, 0.5);
  EXPECT_NEAR(path.length(), 10.0 * kPi, 0.01 * 10.0 * kPi);
}

TEST(SamplePathTest, EndpointsSpacingAndMonotonicity) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Point2> pts = RandomSupport(rng, 4 + trial % 8);
    const SplineChain chain = FitWithChordHeadings(pts);
    const double step = 0.5;
    const SampledPath path = SamplePath(chain, step);
    ASSERT_GE(path.size(), 2u);
    EXPECT_EQ(path.pts.front(), pts.front());
    EXPECT_LT(Distance(path.pts.back(), pts.back()), 1e-9);
    for (std::size_t i = 1; i < path.size(); ++i) {
      const double ds = path.s[i] - path.s[i - 1];
      EXPECT_GT(ds, 0.0);
      EXPECT_NEAR(ds, step, 0.1 * step);
      EXPECT_LE(Distance(path.pts[i - 1], path.pts[i]), ds + 1e-9);
    }
    EXPECT_NEAR(path.length(), DensePolylineLength(chain),
                1e-6 * path.length());
  }
}

TEST(SamplePathTest, RejectsNonPositiveStep) {
  const std::vector<Point2> pts = {{0, 0}, {5, 0}, {10, 0}};
  const SplineChain chain = FitSpline(pts, 0.0, 0.0);
  EXPECT_THROW(SamplePath(chain, 0.0), Error);
  EXPECT_THROW(SamplePath(chain, -1.0), Error);
}

TEST(SamplePathTest, RigidMotionEquivariance) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Point2> pts = RandomSupport(rng, 3 + trial % 10);
    const double rot = angle(rng);
    const Point2 offset{shift(rng), shift(rng)};
    auto move = [&](Point2 p) {
      return Point2{std::cos(rot) * p.x - std::sin(rot) * p.y + offset.x,
                    std::sin(rot) * p.x + std::cos(rot) * p.y + offset.y};
    };
    std::vector<Point2> moved;
    for (const Point2& p : pts) moved.push_back(move(p));
    const Headings h = HeadingFromNeighbors(pts);
    const SampledPath a = SamplePath(FitSpline(pts, h.start, h.end), 0.5);
    const SampledPath b =
        SamplePath(FitSpline(moved, h.start + rot, h.end + rot), 0.5);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_LT(Distance(move(a.pts[i]), b.pts[i]), 1e-9);
      EXPECT_NEAR(std::abs(a.kappa[i]), std::abs(b.kappa[i]), 1e-9);
    }
  }
}

}  // namespace
}  // namespace scnforge
