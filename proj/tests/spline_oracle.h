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

// Dense reference solve of the spline coefficient system.

#ifndef SCNFORGE_TESTS_SPLINE_ORACLE_H_
#define SCNFORGE_TESTS_SPLINE_ORACLE_H_

#include <cmath>
#include <vector>

#include "Eigen/Dense"
#include "scnforge/geometry.h"

namespace scnforge::testing_util {

// Solves the full 4(N-1) coefficient system with a dense LU factorisation:
// interpolation at both ends of every segment, first and second derivative
// continuity at interior joints, and end tangents of chord magnitude along
// the given headings.
inline std::vector<SplineSegment> SolveSplineDense(
    const std::vector<Point2>& pts, double theta_start, double theta_end) {
  const int m = static_cast<int>(pts.size()) - 1;
  const int n = 4 * m;
  const double chord0 = Distance(pts[0], pts[1]);
  const double chord1 = Distance(pts[m - 1], pts[m]);
  std::vector<SplineSegment> out(m);
  for (int axis = 0; axis < 2; ++axis) {
    auto coord = [&](const Point2& p) { return axis == 0 ? p.x : p.y; };
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    int row = 0;
    auto col = [](int seg, int k) { return 4 * seg + k; };
    for (int i = 0; i < m; ++i) {
      a(row, col(i, 0)) = 1.0;
      b(row++) = coord(pts[i]);
      for (int k = 0; k < 4; ++k) a(row, col(i, k)) = 1.0;
      b(row++) = coord(pts[i + 1]);
    }
    for (int i = 0; i + 1 < m; ++i) {
      // xi_i'(1) - xi_{i+1}'(0) = 0
      a(row, col(i, 1)) = 1.0;
      a(row, col(i, 2)) = 2.0;
      a(row, col(i, 3)) = 3.0;
      a(row++, col(i + 1, 1)) = -1.0;
      // xi_i''(1) - xi_{i+1}''(0) = 0
      a(row, col(i, 2)) = 2.0;
      a(row, col(i, 3)) = 6.0;
      a(row++, col(i + 1, 2)) = -2.0;
    }
    a(row, col(0, 1)) = 1.0;
    b(row++) =
        chord0 * (axis == 0 ? std::cos(theta_start) : std::sin(theta_start));
    a(row, col(m - 1, 1)) = 1.0;
    a(row, col(m - 1, 2)) = 2.0;
    a(row, col(m - 1, 3)) = 3.0;
    b(row++) = chord1 * (axis == 0 ? std::cos(theta_end) : std::sin(theta_end));
    const Eigen::VectorXd x = a.fullPivLu().solve(b);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < 4; ++k) {
        (axis == 0 ? out[i].ax : out[i].ay)[k] = x(col(i, k));
      }
    }
  }
  return out;
}

}  // namespace scnforge::testing_util

#endif  // SCNFORGE_TESTS_SPLINE_ORACLE_H_
