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

#include "scnforge/scenario.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "scnforge/error.h"

namespace scnforge {
namespace {

int Orientation(Point2 a, Point2 b, Point2 c) {
  const double cross = Cross(b - a, c - a);
  if (cross > 0.0) return 1;
  if (cross < 0.0) return -1;
  return 0;
}

bool OnSegment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

double PolygonArea(const TrackBounds& track) {
  std::vector<Point2> poly = track.left;
  poly.insert(poly.end(), track.right.rbegin(), track.right.rend());
  double area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    area += Cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * area;
}

// Returns a description of the first problem found, or empty.
std::string TrackProblem(const TrackBounds& track) {
  for (const auto* bound : {&track.left, &track.right}) {
    const char* side = bound == &track.left ? "left" : "right";
    if (bound->size() < 2) {
      return std::string(side) + " bound has fewer than 2 points";
    }
    for (std::size_t i = 0; i < bound->size(); ++i) {
      const Point2 p = (*bound)[i];
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        return std::string(side) + " bound has a non-finite point";
      }
      if (i > 0 && Distance((*bound)[i - 1], p) <= kMinPointSpacing) {
        return std::string(side) + " bound repeats point " + std::to_string(i);
      }
    }
  }
  for (std::size_t i = 0; i + 1 < track.left.size(); ++i) {
    for (std::size_t j = 0; j + 1 < track.right.size(); ++j) {
      if (SegmentsIntersect(track.left[i], track.left[i + 1], track.right[j],
                            track.right[j + 1])) {
        return "left segment " + std::to_string(i) +
               " intersects right segment " + std::to_string(j);
      }
    }
  }
  if (std::abs(PolygonArea(track)) < 1e-9) {
    return "track polygon has zero area";
  }
  return {};
}

Finding ErrorFinding(std::string code, std::string message) {
  return {Severity::kError, std::move(code), std::move(message)};
}

}  // namespace

const VehicleEntry* Scenario::FindVehicle(std::string_view id) const {
  for (const VehicleEntry& v : vehicles) {
    if (v.spec.id == id) return &v;
  }
  return nullptr;
}

VehicleEntry* Scenario::FindVehicle(std::string_view id) {
  for (VehicleEntry& v : vehicles) {
    if (v.spec.id == id) return &v;
  }
  return nullptr;
}

bool HasErrors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::kError;
  });
}

bool SegmentsIntersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = Orientation(a, b, c);
  const int o2 = Orientation(a, b, d);
  const int o3 = Orientation(c, d, a);
  const int o4 = Orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && OnSegment(a, b, c)) return true;
  if (o2 == 0 && OnSegment(a, b, d)) return true;
  if (o3 == 0 && OnSegment(c, d, a)) return true;
  if (o4 == 0 && OnSegment(c, d, b)) return true;
  return false;
}

void CheckTrack(const TrackBounds& track) {
  if (std::string problem = TrackProblem(track); !problem.empty()) {
    throw scnforge::Error(ErrorCode::kInvalidTrack, problem);
  }
}

std::vector<Finding> ValidateScenario(const Scenario& sc) {
  std::vector<Finding> out;
  if (std::string problem = TrackProblem(sc.track); !problem.empty()) {
    out.push_back(ErrorFinding("invalid-track", problem));
  }
  if (!(sc.planning_horizon > 0.0)) {
    out.push_back(
        ErrorFinding("invalid-horizon", "planning horizon must be > 0"));
  }
  if (!(sc.sampling_step > 0.0)) {
    out.push_back(ErrorFinding("invalid-step", "sampling step must be > 0"));
  }
  if (!(sc.friction.a_max > 0.0) || !(sc.friction.v_lim > 0.0)) {
    out.push_back(
        ErrorFinding("invalid-friction", "a_max and v_lim must be > 0"));
  }
  if (sc.vehicles.empty()) {
    out.push_back(ErrorFinding("no-vehicles", "scenario has no vehicles"));
  }

  std::set<std::string> seen;
  int vut_count = 0;
  for (const VehicleEntry& v : sc.vehicles) {
    const std::string& id = v.spec.id;
    const std::string label = "vehicle '" + id + "'";
    if (id.empty())
      out.push_back(ErrorFinding("empty-id", "vehicle id is empty"));
    if (!seen.insert(id).second) {
      out.push_back(ErrorFinding("duplicate-id", "duplicate " + label));
    }
    if (v.spec.is_vut) ++vut_count;
    if (!(v.spec.length > 0.0) || !(v.spec.width > 0.0)) {
      out.push_back(ErrorFinding("invalid-dimensions",
                                 label + " needs positive length/width"));
    }
    if (v.support.size() < 3) {
      out.push_back(ErrorFinding("support-too-short",
                                 label + " has " +
                                     std::to_string(v.support.size()) +
                                     " support points, spline needs 3"));
    }
    try {
      CheckSupportSequence(v.support);
    } catch (const scnforge::Error& e) {
      out.push_back(ErrorFinding("invalid-support", label + ": " + e.what()));
    }
    for (const ProfileEdit& e : v.profile_edits) {
      if (!(e.v >= 0.0) || !std::isfinite(e.s)) {
        out.push_back(
            ErrorFinding("invalid-edit", label + " has an invalid edit"));
        break;
      }
    }
    for (const auto& speed : {v.v_start, v.v_end}) {
      if (speed && !(*speed >= 0.0)) {
        out.push_back(ErrorFinding("invalid-speed",
                                   label + " has a negative boundary speed"));
        break;
      }
    }
  }
  if (!sc.vehicles.empty() && vut_count == 0) {
    out.push_back(ErrorFinding("no-vut", "no vehicle is marked as VUT"));
  } else if (vut_count > 1) {
    out.push_back(ErrorFinding(
        "multiple-vut",
        std::to_string(vut_count) + " vehicles are marked as VUT"));
  }
  return out;
}

double Quantize(double value) {
  constexpr double kScale = 1e9;
  static_assert(kStoredDecimals == 9);
  if (!std::isfinite(value) || std::abs(value) >= 1e6) return value;
  const double q = std::round(value * kScale) / kScale;
  return q == 0.0 ? 0.0 : q;
}

Scenario Quantized(const Scenario& sc) {
  Scenario q = sc;
  auto points = [](std::vector<Point2>& pts) {
    for (Point2& p : pts) p = {Quantize(p.x), Quantize(p.y)};
  };
  points(q.track.left);
  points(q.track.right);
  points(q.raceline);
  q.friction.a_max = Quantize(q.friction.a_max);
  q.friction.v_lim = Quantize(q.friction.v_lim);
  q.planning_horizon = Quantize(q.planning_horizon);
  q.sampling_step = Quantize(q.sampling_step);
  for (VehicleEntry& v : q.vehicles) {
    points(v.support);
    v.spec.length = Quantize(v.spec.length);
    v.spec.width = Quantize(v.spec.width);
    for (ProfileEdit& e : v.profile_edits) {
      e = {Quantize(e.s), Quantize(e.v)};
    }
    if (v.v_start) v.v_start = Quantize(*v.v_start);
    if (v.v_end) v.v_end = Quantize(*v.v_end);
  }
  return q;
}

Trajectory ResolveVehicle(const Scenario& sc, const VehicleEntry& vehicle) {
  const Headings headings = HeadingFromNeighbors(vehicle.support);
  const SplineChain chain =
      FitSpline(vehicle.support, headings.start, headings.end);
  const SampledPath path = SamplePath(chain, sc.sampling_step);
  const VelocityProfile cap = CurvatureSpeedCap(path, sc.friction);
  const double v_start = vehicle.v_start.value_or(cap.v.front());
  const double v_end = vehicle.v_end.value_or(sc.friction.v_lim);
  VelocityProfile profile = InitProfile(path, sc.friction, v_start, v_end);
  // Stored edits follow the path when its length changes under them.
  std::vector<ProfileEdit> edits = vehicle.profile_edits;
  for (ProfileEdit& e : edits) e.s = std::clamp(e.s, 0.0, path.length());
  profile = ApplyProfileEdit(profile, path, edits);
  return TimeParameterize(path, profile);
}

ResolvedScenario Resolve(const Scenario& sc) {
  ResolvedScenario out;
  out.scenario = sc;
  out.trajectories.reserve(sc.vehicles.size());
  for (const VehicleEntry& v : sc.vehicles) {
    try {
      out.trajectories.push_back(ResolveVehicle(sc, v));
    } catch (const scnforge::Error& e) {
      throw scnforge::Error(e.code(),
                            "vehicle '" + v.spec.id + "': " + e.what());
    }
  }
  return out;
}

}  // namespace scnforge
