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

#ifndef SCNFORGE_ANALYSIS_H_
#define SCNFORGE_ANALYSIS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scnforge/geometry.h"
#include "scnforge/scenario.h"
#include "scnforge/velocity.h"

namespace scnforge {

inline constexpr double kDefaultScanDt = 0.01;         // s
inline constexpr double kEventTimeResolution = 1e-4;   // s, bisection width
inline constexpr double kDefaultGridResolution = 0.1;  // m
// Relative slack on the acceleration limit that absorbs rounding in
// profiles which sit exactly on the friction circle.
inline constexpr double kAccelLimitRelTolerance = 1e-9;

struct VehicleState {
  double t = 0.0;
  Point2 pos;
  double theta = 0.0;
  double v = 0.0;
  double a_lon = 0.0;
  double a_lat = 0.0;
  double a_comb = 0.0;
  bool stopped = false;
};

// Corners in counter-clockwise order.
struct OrientedRect {
  std::array<Point2, 4> corners;
};

enum class EventKind { kCollision, kOfftrack, kAccelViolation };

std::string_view EventKindName(EventKind kind);
std::optional<EventKind> ParseEventKind(std::string_view name);

struct Event {
  EventKind kind = EventKind::kCollision;
  double t_first = 0.0;
  std::vector<std::string> participants;
  // Collision: relative speed at contact. Offtrack: speed at departure.
  // Acceleration: peak exceedance over the limit.
  double detail = 0.0;
  // Acceleration events only: time of the peak.
  std::optional<double> t_peak;
};

// Cells are stored row-major, row 0 at the lowest y; true means drivable.
struct OccupancyGrid {
  Point2 origin;  // center of the lower-left cell
  double resolution = kDefaultGridResolution;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> cells;

  bool free(std::size_t col, std::size_t row) const {
    return cells[row * width + col] != 0;
  }
  std::size_t FreeCount() const;
};

struct GroundTruthLabel {
  EventKind kind = EventKind::kCollision;
  std::vector<std::string> participants;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct Verdict {
  std::vector<GroundTruthLabel> matched;
  std::vector<GroundTruthLabel> missed;
  std::vector<Event> unexpected;

  bool pass() const { return missed.empty() && unexpected.empty(); }
};

// Linear interpolation between stored rows (shortest arc for heading).
// Past the last row the vehicle rests at its final pose.
VehicleState StateAtTime(const Trajectory& traj, double t);

OrientedRect Footprint(const VehicleState& state, const VehicleSpec& spec);

// Separating-axis test; touching rectangles overlap.
bool RectsOverlap(const OrientedRect& a, const OrientedRect& b);

// Drivable polygon (left bound followed by the reversed right bound).
std::vector<Point2> DrivablePolygon(const TrackBounds& track);

// Strictly inside by the even-odd rule; points on an edge are outside.
bool InsideDrivable(std::span<const Point2> polygon, Point2 p);

std::vector<Event> CollisionScan(const ResolvedScenario& rs,
                                 double dt = kDefaultScanDt);
std::vector<Event> OfftrackScan(const ResolvedScenario& rs,
                                double dt = kDefaultScanDt);
std::vector<Event> AccelLimitScan(const ResolvedScenario& rs, double a_limit);

OccupancyGrid MakeOccupancyGrid(const TrackBounds& track,
                                double resolution = kDefaultGridResolution);
std::string FormatOccupancyGrid(const OccupancyGrid& grid);

Verdict CompareGroundTruth(std::span<const Event> events,
                           std::span<const GroundTruthLabel> labels);

}  // namespace scnforge

#endif  // SCNFORGE_ANALYSIS_H_
