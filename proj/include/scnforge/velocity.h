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

#ifndef SCNFORGE_VELOCITY_H_
#define SCNFORGE_VELOCITY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "scnforge/geometry.h"

namespace scnforge {

// Curvature magnitudes below this are treated as straight.
inline constexpr double kMinCurvature = 1e-9;
// Summed station speeds below this end the trajectory (vehicle at rest).
inline constexpr double kStopSpeedThreshold = 1e-3;

struct FrictionSpec {
  double a_max = 13.0;  // combined acceleration limit, m/s^2
  double v_lim = 30.0;  // absolute top speed, m/s

  friend bool operator==(const FrictionSpec&, const FrictionSpec&) = default;
};

// Speeds in m/s aligned with the stations of a SampledPath.
struct VelocityProfile {
  std::vector<double> v;

  std::size_t size() const { return v.size(); }
};

struct ProfileEdit {
  double s = 0.0;  // m
  double v = 0.0;  // m/s

  friend bool operator==(const ProfileEdit&, const ProfileEdit&) = default;
};

// Time-parameterized path. `path` may be shorter than the path the profile
// was planned on when the vehicle comes to rest before the end.
struct Trajectory {
  SampledPath path;
  VelocityProfile profile;
  std::vector<double> t;
  std::vector<double> a_lon;
  std::vector<double> a_lat;
  std::vector<double> a_comb;

  std::size_t size() const { return t.size(); }
  double duration() const { return t.empty() ? 0.0 : t.back(); }
};

void CheckFrictionSpec(const FrictionSpec& spec);

// Pure-lateral friction limit per station, capped at v_lim.
VelocityProfile CurvatureSpeedCap(const SampledPath& path,
                                  const FrictionSpec& spec);

// Forward-backward solver. Each pass accelerates as hard as the friction
// circle allows at both ends of a step; the result is the pointwise minimum
// of the two passes. Unreachable end speeds are lowered.
VelocityProfile InitProfile(const SampledPath& path, const FrictionSpec& spec,
                            double v_start, double v_end);

// Applies one batch of (s, v) edits. Each edit snaps to the nearest station
// and stations between consecutive edits are interpolated linearly over s.
// No friction clamp is applied.
VelocityProfile ApplyProfileEdit(const VelocityProfile& profile,
                                 const SampledPath& path,
                                 std::span<const ProfileEdit> edits);

Trajectory TimeParameterize(const SampledPath& path,
                            const VelocityProfile& profile);

}  // namespace scnforge

#endif  // SCNFORGE_VELOCITY_H_
