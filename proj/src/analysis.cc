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

#include "scnforge/analysis.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "scnforge/error.h"
#include "scnforge/scenario_json.h"

namespace scnforge {
namespace {

// Points closer than this to a bound edge count as on the bound.
constexpr double kOnEdgeTolerance = 1e-12;

double WrapAngle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

double Lerp(double a, double b, double w) { return a + (b - a) * w; }

double SegmentDistance(Point2 a, Point2 b, Point2 p) {
  const Point2 ab = b - a;
  const double len_sq = Dot(ab, ab);
  double w = len_sq > 0.0 ? Dot(p - a, ab) / len_sq : 0.0;
  w = std::clamp(w, 0.0, 1.0);
  return Distance(a + w * ab, p);
}

void Project(const OrientedRect& r, Point2 axis, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const Point2& c : r.corners) {
    const double p = Dot(c, axis);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
}

// Earliest time in [0, horizon] at which `hit` holds, sampled every `dt` and
// refined by bisection. The predicate is assumed to hold from its first
// sampled occurrence.
std::optional<double> FirstHit(const std::function<bool(double)>& hit,
                               double horizon, double dt) {
  double prev = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double t = std::min(static_cast<double>(k) * dt, horizon);
    if (hit(t)) {
      if (k == 0) return 0.0;
      double lo = prev, hi = t;
      while (hi - lo > kEventTimeResolution) {
        const double mid = 0.5 * (lo + hi);
        (hit(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    if (t >= horizon) return std::nullopt;
    prev = t;
  }
}

void CheckDt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::kInvalidInput, "scan dt must be > 0");
  }
}

Point2 VelocityVector(const VehicleState& s) {
  return s.v * Point2{std::cos(s.theta), std::sin(s.theta)};
}

std::vector<std::string> Sorted(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kCollision:
      return "collision";
    case EventKind::kOfftrack:
      return "offtrack";
    case EventKind::kAccelViolation:
      return "accel_violation";
  }
  return "unknown";
}

std::optional<EventKind> ParseEventKind(std::string_view name) {
  for (EventKind k : {EventKind::kCollision, EventKind::kOfftrack,
                      EventKind::kAccelViolation}) {
    if (EventKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::size_t OccupancyGrid::FreeCount() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), 1));
}

VehicleState StateAtTime(const Trajectory& traj, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidInput, "query time must be >= 0");
  }
  if (traj.size() == 0) {
    throw Error(ErrorCode::kInvalidInput, "empty trajectory");
  }
  auto row = [&](std::size_t i) {
    VehicleState s;
    s.t = traj.t[i];
    s.pos = traj.path.pts[i];
    s.theta = traj.path.theta[i];
    s.v = traj.profile.v[i];
    s.a_lon = traj.a_lon[i];
    s.a_lat = traj.a_lat[i];
    s.a_comb = traj.a_comb[i];
    return s;
  };
  const std::size_t last = traj.size() - 1;
  if (t >= traj.t[last]) {
    VehicleState s = row(last);
    if (t > traj.t[last] || s.v == 0.0) {
      s.t = t;
      s.v = 0.0;
      s.a_lon = s.a_lat = s.a_comb = 0.0;
      s.stopped = true;
    }
    return s;
  }
  const auto it = std::upper_bound(traj.t.begin(), traj.t.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - traj.t.begin());
  const std::size_t lo = hi - 1;
  if (traj.t[lo] == t) return row(lo);

  const double w = (t - traj.t[lo]) / (traj.t[hi] - traj.t[lo]);
  const VehicleState a = row(lo), b = row(hi);
  VehicleState s;
  s.t = t;
  s.pos = {Lerp(a.pos.x, b.pos.x, w), Lerp(a.pos.y, b.pos.y, w)};
  s.theta = WrapAngle(a.theta + WrapAngle(b.theta - a.theta) * w);
  s.v = Lerp(a.v, b.v, w);
  s.a_lon = Lerp(a.a_lon, b.a_lon, w);
  s.a_lat = Lerp(a.a_lat, b.a_lat, w);
  s.a_comb = std::hypot(s.a_lon, s.a_lat);
  return s;
}

OrientedRect Footprint(const VehicleState& state, const VehicleSpec& spec) {
  const Point2 fwd{std::cos(state.theta), std::sin(state.theta)};
  const Point2 left{-fwd.y, fwd.x};
  const Point2 hl = 0.5 * spec.length * fwd;
  const Point2 hw = 0.5 * spec.width * left;
  return {{state.pos - hl - hw, state.pos + hl - hw, state.pos + hl + hw,
           state.pos - hl + hw}};
}

bool RectsOverlap(const OrientedRect& a, const OrientedRect& b) {
  for (const OrientedRect* r : {&a, &b}) {
    for (int e = 0; e < 2; ++e) {
      const Point2 edge = r->corners[e + 1] - r->corners[e];
      const Point2 axis{-edge.y, edge.x};
      double a_lo, a_hi, b_lo, b_hi;
      Project(a, axis, a_lo, a_hi);
      Project(b, axis, b_lo, b_hi);
      if (a_hi < b_lo || b_hi < a_lo) return false;
    }
  }
  return true;
}

std::vector<Point2> DrivablePolygon(const TrackBounds& track) {
  std::vector<Point2> poly = track.left;
  poly.insert(poly.end(), track.right.rbegin(), track.right.rend());
  return poly;
}

bool InsideDrivable(std::span<const Point2> polygon, Point2 p) {
  const std::size_t n = polygon.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = polygon[j], b = polygon[i];
    if (SegmentDistance(a, b, p) <= kOnEdgeTolerance) return false;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

std::vector<Event> CollisionScan(const ResolvedScenario& rs, double dt) {
  CheckDt(dt);
  std::vector<Event> events;
  const auto& vehicles = rs.scenario.vehicles;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    for (std::size_t j = i + 1; j < vehicles.size(); ++j) {
      const Trajectory& ta = rs.trajectories[i];
      const Trajectory& tb = rs.trajectories[j];
      auto overlap = [&](double t) {
        return RectsOverlap(Footprint(StateAtTime(ta, t), vehicles[i].spec),
                            Footprint(StateAtTime(tb, t), vehicles[j].spec));
      };
      const double horizon = std::max(ta.duration(), tb.duration());
      if (auto t = FirstHit(overlap, horizon, dt)) {
        const Point2 rel = VelocityVector(StateAtTime(ta, *t)) -
                           VelocityVector(StateAtTime(tb, *t));
        events.push_back({EventKind::kCollision,
                          *t,
                          {vehicles[i].spec.id, vehicles[j].spec.id},
                          Norm(rel),
                          std::nullopt});
      }
    }
  }
  return events;
}

std::vector<Event> OfftrackScan(const ResolvedScenario& rs, double dt) {
  CheckDt(dt);
  CheckTrack(rs.scenario.track);
  const std::vector<Point2> polygon = DrivablePolygon(rs.scenario.track);
  std::vector<Event> events;
  const auto& vehicles = rs.scenario.vehicles;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const Trajectory& traj = rs.trajectories[i];
    auto off = [&](double t) {
      const OrientedRect r = Footprint(StateAtTime(traj, t), vehicles[i].spec);
      return std::any_of(r.corners.begin(), r.corners.end(),
                         [&](Point2 c) { return !InsideDrivable(polygon, c); });
    };
    if (auto t = FirstHit(off, traj.duration(), dt)) {
      events.push_back({EventKind::kOfftrack,
                        *t,
                        {vehicles[i].spec.id},
                        StateAtTime(traj, *t).v,
                        std::nullopt});
    }
  }
  return events;
}

std::vector<Event> AccelLimitScan(const ResolvedScenario& rs, double a_limit) {
  if (!(a_limit > 0.0) || !std::isfinite(a_limit)) {
    throw Error(ErrorCode::kInvalidInput, "acceleration limit must be > 0");
  }
  const double threshold = a_limit * (1.0 + kAccelLimitRelTolerance);
  std::vector<Event> events;
  const auto& vehicles = rs.scenario.vehicles;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const Trajectory& traj = rs.trajectories[i];
    std::optional<Event> run;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const double a = traj.a_comb[k];
      if (a > threshold) {
        if (!run) {
          run = Event{EventKind::kAccelViolation,
                      traj.t[k],
                      {vehicles[i].spec.id},
                      a - a_limit,
                      traj.t[k]};
        } else if (a - a_limit > run->detail) {
          run->detail = a - a_limit;
          run->t_peak = traj.t[k];
        }
      } else if (run) {
        events.push_back(*run);
        run.reset();
      }
    }
    if (run) events.push_back(*run);
  }
  return events;
}

OccupancyGrid MakeOccupancyGrid(const TrackBounds& track, double resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorCode::kInvalidInput, "grid resolution must be > 0");
  }
  CheckTrack(track);
  const std::vector<Point2> polygon = DrivablePolygon(track);
  double xmin = polygon[0].x, xmax = xmin, ymin = polygon[0].y, ymax = ymin;
  for (const Point2& p : polygon) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  auto cells_for = [&](double extent) {
    return static_cast<std::size_t>(std::ceil(extent / resolution - 1e-9)) + 2;
  };
  OccupancyGrid grid;
  grid.resolution = resolution;
  grid.width = cells_for(xmax - xmin);
  grid.height = cells_for(ymax - ymin);
  grid.origin = {xmin - 0.5 * resolution, ymin - 0.5 * resolution};
  grid.cells.assign(grid.width * grid.height, 0);
  for (std::size_t row = 0; row < grid.height; ++row) {
    const double y = grid.origin.y + static_cast<double>(row) * resolution;
    for (std::size_t col = 0; col < grid.width; ++col) {
      const double x = grid.origin.x + static_cast<double>(col) * resolution;
      grid.cells[row * grid.width + col] =
          InsideDrivable(polygon, {x, y}) ? 1 : 0;
    }
  }
  return grid;
}

std::string FormatOccupancyGrid(const OccupancyGrid& grid) {
  std::string out = "resolution " + FormatNumber(grid.resolution) + "\n";
  out += "origin " + FormatNumber(grid.origin.x) + " " +
         FormatNumber(grid.origin.y) + "\n";
  out += "size " + std::to_string(grid.width) + " " +
         std::to_string(grid.height) + "\n";
  out.reserve(out.size() + grid.cells.size() * 2);
  for (std::size_t row = 0; row < grid.height; ++row) {
    for (std::size_t col = 0; col < grid.width; ++col) {
      if (col > 0) out += ' ';
      out += grid.free(col, row) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

Verdict CompareGroundTruth(std::span<const Event> events,
                           std::span<const GroundTruthLabel> labels) {
  Verdict verdict;
  std::vector<bool> used(events.size(), false);
  for (const GroundTruthLabel& label : labels) {
    const std::vector<std::string> want = Sorted(label.participants);
    bool found = false;
    for (std::size_t i = 0; i < events.size() && !found; ++i) {
      const Event& e = events[i];
      if (used[i] || e.kind != label.kind) continue;
      if (Sorted(e.participants) != want) continue;
      if (e.t_first < label.t_lo || e.t_first > label.t_hi) continue;
      used[i] = true;
      found = true;
    }
    (found ? verdict.matched : verdict.missed).push_back(label);
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!used[i]) verdict.unexpected.push_back(events[i]);
  }
  return verdict;
}

}  // namespace scnforge
