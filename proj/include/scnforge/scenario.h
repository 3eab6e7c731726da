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

#ifndef SCNFORGE_SCENARIO_H_
#define SCNFORGE_SCENARIO_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scnforge/geometry.h"
#include "scnforge/velocity.h"

namespace scnforge {

inline constexpr std::string_view kSchemaVersion = "1";
// Stored numbers keep this many digits after the decimal point.
inline constexpr int kStoredDecimals = 9;
// Stored vs recomputed trajectory tables may differ by this much before an
// import reports the file as stale.
inline constexpr double kStalenessTolerance = 1e-6;

// Drivable region is the polygon left + reversed(right).
struct TrackBounds {
  std::vector<Point2> left;
  std::vector<Point2> right;

  friend bool operator==(const TrackBounds&, const TrackBounds&) = default;
};

struct VehicleSpec {
  std::string id;
  double length = 4.7;
  double width = 2.0;
  bool is_vut = false;
  std::string color = "#1f77b4";

  friend bool operator==(const VehicleSpec&, const VehicleSpec&) = default;
};

struct VehicleEntry {
  VehicleSpec spec;
  std::vector<Point2> support;
  // One batch, ordered by s.
  std::vector<ProfileEdit> profile_edits;
  // Unset start speed means the curvature cap at the first station; unset end
  // speed means v_lim.
  std::optional<double> v_start;
  std::optional<double> v_end;

  friend bool operator==(const VehicleEntry&, const VehicleEntry&) = default;
};

struct Scenario {
  std::string name;
  TrackBounds track;
  // Optional display-only race line bundled with imported tracks.
  std::vector<Point2> raceline;
  std::vector<VehicleEntry> vehicles;
  FrictionSpec friction;
  double planning_horizon = 3.0;  // s
  double sampling_step = kDefaultSamplingStep;

  const VehicleEntry* FindVehicle(std::string_view id) const;
  VehicleEntry* FindVehicle(std::string_view id);

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Severity { kWarning, kError };

struct Finding {
  Severity severity = Severity::kError;
  std::string code;
  std::string message;
};

bool HasErrors(const std::vector<Finding>& findings);

// Structural checks. Empty result means valid.
std::vector<Finding> ValidateScenario(const Scenario& sc);

// Throws kInvalidTrack when the track is not a usable polygon or the two
// bounds cross.
void CheckTrack(const TrackBounds& track);

// True if segments [a, b] and [c, d] share at least one point.
bool SegmentsIntersect(Point2 a, Point2 b, Point2 c, Point2 d);

// Header `x_left;y_left;x_right;y_right`, one row per index; a side may be
// left blank once its bound has no more points.
TrackBounds ImportBoundsCsv(std::string_view text);
std::string ExportBoundsCsv(const TrackBounds& track);

// Rounds to kStoredDecimals places (negative zero becomes zero).
double Quantize(double value);
Scenario Quantized(const Scenario& sc);

// Scenario with every vehicle's trajectory computed.
struct ResolvedScenario {
  Scenario scenario;
  std::vector<Trajectory> trajectories;  // aligned with scenario.vehicles
};

// Full pipeline for one vehicle: headings, spline fit, sampling, profile
// initialization, manual edits, time parameterization.
Trajectory ResolveVehicle(const Scenario& sc, const VehicleEntry& vehicle);

// Throws with the failing vehicle named if any trajectory cannot be built.
ResolvedScenario Resolve(const Scenario& sc);

// Serializes the scenario as a `.scn.json` document. Authoring values are
// quantized before trajectories are resolved, so exporting an imported
// export is byte-identical.
std::string ExportScenario(const Scenario& sc);

struct ImportResult {
  Scenario scenario;
  // One entry per vehicle whose stored table does not match a recompute.
  std::vector<std::string> warnings;
};

ImportResult ImportScenario(std::string_view document);

}  // namespace scnforge

#endif  // SCNFORGE_SCENARIO_H_
