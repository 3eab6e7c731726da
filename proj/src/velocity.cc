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

#include "scnforge/velocity.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "scnforge/error.h"

namespace scnforge {
namespace {

// Edit positions may overshoot the path ends by this much (rounding).
constexpr double kEditRangeSlack = 1e-6;

// Longitudinal acceleration left over at squared speed `u` on curvature
// `kappa` once the lateral demand is served.
double AvailableLongitudinal(double a_max, double u, double kappa) {
  const double a_lat = u * std::abs(kappa);
  return std::sqrt(std::max(0.0, a_max * a_max - a_lat * a_lat));
}

// Largest squared speed reachable at the next station when leaving a station
// at squared speed `u_from` (curvature `kappa_from`) and arriving on
// curvature `kappa_to` after `ds` meters, with the friction circle holding at
// both stations. `u_cap` is the squared speed cap at the arrival station.
double StepLimit(double a_max, double u_from, double kappa_from,
                 double kappa_to, double ds, double u_cap) {
  if (u_from >= u_cap) return u_cap;
  // Departure-side budget.
  const double explicit_limit =
      u_from + 2.0 * ds * AvailableLongitudinal(a_max, u_from, kappa_from);
  // Arrival-side budget: u - u_from = 2 ds sqrt(a^2 - kappa^2 u^2), solved
  // for the larger root of the resulting quadratic in u.
  const double k = std::abs(kappa_to);
  const double c = 4.0 * ds * ds * k * k;
  const double disc = (1.0 + c) * a_max * a_max - k * k * u_from * u_from;
  const double implicit_limit =
      (u_from + 2.0 * ds * std::sqrt(std::max(0.0, disc))) / (1.0 + c);
  return std::min({u_cap, explicit_limit, implicit_limit});
}

void CheckAligned(const SampledPath& path, const VelocityProfile& profile) {
  if (profile.size() != path.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "profile has " + std::to_string(profile.size()) +
                    " entries for " + std::to_string(path.size()) +
                    " stations");
  }
}

}  // namespace

void CheckFrictionSpec(const FrictionSpec& spec) {
  if (!(spec.a_max > 0.0) || !std::isfinite(spec.a_max)) {
    throw Error(ErrorCode::kInvalidInput, "a_max must be positive");
  }
  if (!(spec.v_lim > 0.0) || !std::isfinite(spec.v_lim)) {
    throw Error(ErrorCode::kInvalidInput, "v_lim must be positive");
  }
}

VelocityProfile CurvatureSpeedCap(const SampledPath& path,
                                  const FrictionSpec& spec) {
  CheckFrictionSpec(spec);
  VelocityProfile cap;
  cap.v.reserve(path.size());
  for (double kappa : path.kappa) {
    const double k = std::max(std::abs(kappa), kMinCurvature);
    cap.v.push_back(std::min(spec.v_lim, std::sqrt(spec.a_max / k)));
  }
  return cap;
}

VelocityProfile InitProfile(const SampledPath& path, const FrictionSpec& spec,
                            double v_start, double v_end) {
  if (!(v_start >= 0.0) || !(v_end >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "boundary speeds must be >= 0");
  }
  VelocityProfile cap = CurvatureSpeedCap(path, spec);
  const std::size_t n = cap.size();
  if (n == 0) return cap;
  cap.v.front() = std::min(cap.v.front(), v_start);
  cap.v.back() = std::min(cap.v.back(), v_end);

  // Work in squared speeds.
  std::vector<double> u_cap(n);
  for (std::size_t i = 0; i < n; ++i) u_cap[i] = cap.v[i] * cap.v[i];

  std::vector<double> fwd(n), bwd(n);
  fwd.front() = u_cap.front();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    fwd[i + 1] = StepLimit(spec.a_max, fwd[i], path.kappa[i], path.kappa[i + 1],
                           path.s[i + 1] - path.s[i], u_cap[i + 1]);
  }
  bwd.back() = u_cap.back();
  for (std::size_t i = n - 1; i > 0; --i) {
    bwd[i - 1] = StepLimit(spec.a_max, bwd[i], path.kappa[i], path.kappa[i - 1],
                           path.s[i] - path.s[i - 1], u_cap[i - 1]);
  }

  VelocityProfile out;
  out.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.v[i] = std::sqrt(std::min(fwd[i], bwd[i]));
  }
  return out;
}

VelocityProfile ApplyProfileEdit(const VelocityProfile& profile,
                                 const SampledPath& path,
                                 std::span<const ProfileEdit> edits) {
  CheckAligned(path, profile);
  VelocityProfile out = profile;
  if (edits.empty() || path.size() == 0) return out;

  std::vector<ProfileEdit> sorted(edits.begin(), edits.end());
  for (const ProfileEdit& e : sorted) {
    if (!std::isfinite(e.v) || e.v < 0.0) {
      throw Error(ErrorCode::kInvalidInput, "edit speed must be >= 0");
    }
    if (!std::isfinite(e.s) || e.s < -kEditRangeSlack ||
        e.s > path.length() + kEditRangeSlack) {
      throw Error(
          ErrorCode::kInvalidInput,
          "edit position " + std::to_string(e.s) + " outside path range");
    }
  }
  std::stable_sort(
      sorted.begin(), sorted.end(),
      [](const ProfileEdit& a, const ProfileEdit& b) { return a.s < b.s; });

  auto nearest_station = [&](double s) {
    auto it = std::lower_bound(path.s.begin(), path.s.end(), s);
    if (it == path.s.end()) return path.size() - 1;
    auto j = static_cast<std::size_t>(it - path.s.begin());
    if (j > 0 && s - path.s[j - 1] <= path.s[j] - s) --j;
    return j;
  };

  std::size_t prev_station = nearest_station(sorted.front().s);
  out.v[prev_station] = sorted.front().v;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const std::size_t station = nearest_station(sorted[k].s);
    const double v0 = sorted[k - 1].v;
    const double v1 = sorted[k].v;
    const double s0 = path.s[prev_station];
    const double span = path.s[station] - s0;
    for (std::size_t j = prev_station; j <= station; ++j) {
      out.v[j] = span > 0.0 ? v0 + (v1 - v0) * (path.s[j] - s0) / span : v1;
    }
    prev_station = station;
  }
  return out;
}

Trajectory TimeParameterize(const SampledPath& path,
                            const VelocityProfile& profile) {
  CheckAligned(path, profile);
  for (double v : profile.v) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidInput, "profile speeds must be >= 0");
    }
  }
  const std::size_t n = path.size();
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "empty path");

  Trajectory traj;
  traj.t.push_back(0.0);
  std::size_t last = n - 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double vsum = profile.v[i] + profile.v[i + 1];
    if (vsum <= kStopSpeedThreshold) {
      last = i;
      break;
    }
    const double ds = path.s[i + 1] - path.s[i];
    traj.t.push_back(traj.t.back() + 2.0 * ds / vsum);
    const double v0 = profile.v[i], v1 = profile.v[i + 1];
    traj.a_lon.push_back((v1 * v1 - v0 * v0) / (2.0 * ds));
  }
  traj.a_lon.push_back(traj.a_lon.empty() ? 0.0 : traj.a_lon.back());

  const std::size_t rows = last + 1;
  traj.path.s.assign(path.s.begin(), path.s.begin() + rows);
  traj.path.pts.assign(path.pts.begin(), path.pts.begin() + rows);
  traj.path.theta.assign(path.theta.begin(), path.theta.begin() + rows);
  traj.path.kappa.assign(path.kappa.begin(), path.kappa.begin() + rows);
  traj.profile.v.assign(profile.v.begin(), profile.v.begin() + rows);

  traj.a_lat.resize(rows);
  traj.a_comb.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double v = traj.profile.v[i];
    traj.a_lat[i] = v * v * traj.path.kappa[i];
    traj.a_comb[i] = std::hypot(traj.a_lon[i], traj.a_lat[i]);
  }
  return traj;
}

}  // namespace scnforge
