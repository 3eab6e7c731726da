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

// Regenerates the bundled fixtures:
//
//   make_fixtures [output_dir]
//
// writes scenarios/*.scn.json, labels/*.json and tracks/track_a.csv under
// output_dir (default: ./fixtures). Every fixture is checked against its
// intended event set before anything is written.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "scnforge/analysis.h"
#include "scnforge/analysis_json.h"
#include "scnforge/scenario.h"
#include "scnforge/scenario_json.h"

namespace scnforge {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Piece of a centreline: a straight (curvature 0) or a circular arc.
struct Piece {
  double length;
  double curvature;
};

// Arc-length parameterized centreline built from straights and arcs.
class Centerline {
 public:
  Centerline(Point2 start, double heading, std::vector<Piece> pieces)
      : start_(start), heading_(heading), pieces_(std::move(pieces)) {
    for (const Piece& p : pieces_) length_ += p.length;
  }

  double length() const { return length_; }

  // Pose at arc length `s`; values outside [0, length] extend the first and
  // last pieces as straights.
  void Pose(double s, Point2& point, double& heading) const {
    point = start_;
    heading = heading_;
    if (s < 0.0) {
      point = point + s * Point2{std::cos(heading), std::sin(heading)};
      return;
    }
    for (const Piece& p : pieces_) {
      const double ds = std::min(s, p.length);
      Advance(p.curvature, ds, point, heading);
      s -= ds;
      if (s <= 0.0) return;
    }
    Advance(0.0, s, point, heading);
  }

  Point2 At(double s, double lateral = 0.0) const {
    Point2 p;
    double h;
    Pose(s, p, h);
    return p + lateral * Point2{-std::sin(h), std::cos(h)};
  }

  // Bounds `half_width` either side, sampled every `step` meters over
  // [-overhang, length + overhang].
  TrackBounds Bounds(double half_width, double step, double overhang) const {
    TrackBounds t;
    const int n = static_cast<int>(std::ceil((length_ + 2 * overhang) / step));
    for (int i = 0; i <= n; ++i) {
      const double s = -overhang + (length_ + 2 * overhang) * i / n;
      t.left.push_back(At(s, half_width));
      t.right.push_back(At(s, -half_width));
    }
    return t;
  }

  // Points every `spacing` meters over [s0, s1], ending exactly at s1.
  std::vector<Point2> Support(double s0, double s1, double spacing,
                              double lateral = 0.0) const {
    std::vector<Point2> pts;
    const int n =
        std::max(2, static_cast<int>(std::round((s1 - s0) / spacing)));
    for (int i = 0; i <= n; ++i)
      pts.push_back(At(s0 + (s1 - s0) * i / n, lateral));
    return pts;
  }

 private:
  static void Advance(double k, double ds, Point2& p, double& h) {
    if (std::abs(k) < 1e-12) {
      p = p + ds * Point2{std::cos(h), std::sin(h)};
      return;
    }
    const double h1 = h + k * ds;
    p = p + (1.0 / k) *
                Point2{std::sin(h1) - std::sin(h), -std::cos(h1) + std::cos(h)};
    h = h1;
  }

  Point2 start_;
  double heading_;
  std::vector<Piece> pieces_;
  double length_ = 0.0;
};

Centerline TrackACenterline() {
  return Centerline({0.0, 0.0}, 0.0,
                    {{30.0, 0.0},
                     {30.0 * 75 * kDeg, 1.0 / 30.0},
                     {10.0, 0.0},
                     {40.0 * 120 * kDeg, -1.0 / 40.0},
                     {10.0, 0.0},
                     {50.0 * 45 * kDeg, 1.0 / 50.0},
                     {80.0, 0.0}});
}

constexpr double kTrackAHalfWidth = 6.0;
constexpr double kRacelineSpacing = 12.0;

Scenario TrackAScenario(const std::string& name) {
  const Centerline c = TrackACenterline();
  Scenario sc;
  sc.name = name;
  sc.friction = {13.0, 25.0};
  sc.planning_horizon = 3.0;
  sc.track = c.Bounds(kTrackAHalfWidth, 2.0, 10.0);
  sc.raceline = c.Support(0.0, c.length(), kRacelineSpacing);
  return sc;
}

VehicleEntry Vut(std::vector<Point2> support) {
  VehicleEntry v;
  v.spec.id = "vut";
  v.spec.is_vut = true;
  v.spec.color = "#d62728";
  v.support = std::move(support);
  return v;
}

std::vector<Event> AllScans(const Scenario& sc, double dt = kDefaultScanDt) {
  const ResolvedScenario rs = Resolve(sc);
  std::vector<Event> events = CollisionScan(rs, dt);
  for (const Event& e : OfftrackScan(rs, dt)) events.push_back(e);
  for (const Event& e : AccelLimitScan(rs, sc.friction.a_max)) {
    events.push_back(e);
  }
  return events;
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("fixture check failed: " + what);
}

std::size_t CountKind(const std::vector<Event>& events, EventKind kind) {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(),
                    [&](const Event& e) { return e.kind == kind; }));
}

// --- Scenario A: lead vehicle hard-stops in front of the VUT ---------------

constexpr double kBrakeStart = 3.0;     // s
constexpr double kBrakeHandover = 7.0;  // m/s
constexpr double kHardBrakeShare = 0.9;
constexpr double kSoftBrake = 3.0;  // m/s^2
constexpr double kTargetContact = 4.5;

Scenario ScenarioA(double lead_offset) {
  const Centerline c = TrackACenterline();
  Scenario sc = TrackAScenario("scenario_a");
  sc.vehicles.push_back(Vut(sc.raceline));

  VehicleEntry lead;
  lead.spec.id = "veh_2";
  lead.spec.color = "#1f77b4";
  lead.support = c.Support(lead_offset, c.length(), kRacelineSpacing);
  sc.vehicles.push_back(lead);
  sc = Quantized(sc);

  // Braking is authored against the untouched lead trajectory: one edit per
  // station from the moment t passes kBrakeStart until standstill.
  const Trajectory base = ResolveVehicle(sc, sc.vehicles[1]);
  std::size_t k = 0;
  while (k < base.size() && base.t[k] < kBrakeStart) ++k;
  Require(k + 1 < base.size(), "lead trajectory shorter than braking start");
  const SampledPath& path = base.path;
  const double a_max = sc.friction.a_max;
  std::vector<ProfileEdit> edits;
  double v = base.profile.v[k];
  edits.push_back({path.s[k], v});
  for (std::size_t j = k; j + 1 < path.size(); ++j) {
    const double a_lat = v * v * path.kappa[j];
    const double budget =
        std::sqrt(std::max(0.0, a_max * a_max - a_lat * a_lat));
    const double decel = v > kBrakeHandover ? kHardBrakeShare * budget
                                            : std::min(kSoftBrake, budget);
    const double u = v * v - 2.0 * decel * (path.s[j + 1] - path.s[j]);
    v = u > 0.0 ? std::sqrt(u) : 0.0;
    edits.push_back({path.s[j + 1], v});
    if (v == 0.0) break;
  }
  Require(edits.back().v == 0.0, "lead does not come to a stop");
  edits.push_back({path.length(), 0.0});
  sc.vehicles[1].profile_edits = edits;
  return Quantized(sc);
}

double ContactTime(const Scenario& sc, double dt) {
  const std::vector<Event> events = CollisionScan(Resolve(sc), dt);
  return events.empty() ? 1e9 : events.front().t_first;
}

Scenario TuneScenarioA() {
  double lo = 10.0, hi = 60.0;
  Require(ContactTime(ScenarioA(lo), kDefaultScanDt) < kTargetContact &&
              ContactTime(ScenarioA(hi), kDefaultScanDt) > kTargetContact,
          "scenario A offset bracket");
  for (int iter = 0; iter < 40; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (ContactTime(ScenarioA(mid), kDefaultScanDt) < kTargetContact ? lo : hi) =
        mid;
  }
  // Round the offset to the millimetre for a readable generator log.
  return ScenarioA(std::round(0.5 * (lo + hi) * 1000.0) / 1000.0);
}

// --- Scenario B: right turn with a path drawn towards the outer bound -------

Centerline TrackBCenterline() {
  return Centerline(
      {0.0, 0.0}, 0.0,
      {{40.0, 0.0}, {25.0 * 90 * kDeg, -1.0 / 25.0}, {40.0, 0.0}});
}

constexpr double kTrackBHalfWidth = 4.0;

Scenario ScenarioB() {
  const Centerline c = TrackBCenterline();
  Scenario sc;
  sc.name = "scenario_b";
  sc.friction = {13.0, 25.0};
  sc.track = c.Bounds(kTrackBHalfWidth, 1.0, 0.0);
  // Centre line doubles as the control path.
  sc.raceline = c.Support(5.0, c.length() - 5.0, 8.0);
  // Support points stay inside the track but lean towards the outer (left)
  // bound through the turn.
  std::vector<Point2> drift;
  const double s_apex = 40.0 + 25.0 * 45 * kDeg;
  for (double s : {5.0, 15.0, 25.0, 33.0, 41.0, 49.0, s_apex, 68.0, 76.0, 85.0,
                   95.0, 105.0, c.length() - 5.0}) {
    const double w = std::exp(-std::pow((s - s_apex) / 14.0, 2));
    drift.push_back(c.At(s, 3.2 * w));
  }
  sc.vehicles.push_back(Vut(drift));
  return Quantized(sc);
}

// --- Scenario C: velocity raised around s = 50 m on the Scenario A path ----

constexpr double kRaisedCentre = 50.0;
constexpr double kRaisedHalfSpan = 6.0;
constexpr double kRaisedBy = 3.0;  // m/s

Scenario ScenarioCBase() {
  Scenario sc = TrackAScenario("scenario_c");
  sc.vehicles.push_back(Vut(sc.raceline));
  return Quantized(sc);
}

Scenario ScenarioC() {
  Scenario sc = ScenarioCBase();
  const Trajectory base = ResolveVehicle(sc, sc.vehicles[0]);
  auto speed_at = [&](double s) {
    const auto it = std::lower_bound(base.path.s.begin(), base.path.s.end(), s);
    return base.profile.v[static_cast<std::size_t>(it - base.path.s.begin())];
  };
  const double s0 = kRaisedCentre - kRaisedHalfSpan;
  const double s1 = kRaisedCentre + kRaisedHalfSpan;
  sc.vehicles[0].profile_edits = {
      {s0, speed_at(s0)},
      {kRaisedCentre, speed_at(kRaisedCentre) + kRaisedBy},
      {s1, speed_at(s1)}};
  return Quantized(sc);
}

Scenario Nominal() {
  Scenario sc = TrackAScenario("nominal");
  sc.vehicles.push_back(Vut(sc.raceline));
  return Quantized(sc);
}

// --- Output ----------------------------------------------------------------

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

GroundTruthLabel LabelAround(const Event& e, double half_window) {
  const double lo =
      std::max(0.0, std::floor((e.t_first - half_window) * 100) / 100);
  const double hi = std::ceil((e.t_first + half_window) * 100) / 100;
  return {e.kind, e.participants, lo, hi};
}

void WriteLabels(const std::filesystem::path& path,
                 const std::vector<GroundTruthLabel>& labels) {
  Json arr = Json::array();
  for (const GroundTruthLabel& l : labels) arr.push_back(LabelToJson(l));
  WriteFile(path, arr.dump(2) + "\n");
}

int Run(const std::filesystem::path& root) {
  const std::filesystem::path scenarios = root / "scenarios";
  const std::filesystem::path labels = root / "labels";

  const Scenario a = TuneScenarioA();
  const std::vector<Event> ea = AllScans(a);
  Require(ea.size() == 1 && ea[0].kind == EventKind::kCollision,
          "scenario A must have exactly one collision");
  Require(std::abs(ea[0].t_first - kTargetContact) < 0.05,
          "scenario A contact time");
  std::printf("scenario_a: contact at %.4f s, relative speed %.3f m/s\n",
              ea[0].t_first, ea[0].detail);

  const Scenario b = ScenarioB();
  const std::vector<Event> eb = AllScans(b);
  Require(eb.size() == 1 && eb[0].kind == EventKind::kOfftrack,
          "scenario B must have exactly one offtrack event");
  Scenario control = b;
  control.vehicles[0].support = b.raceline;
  Require(AllScans(control).empty(), "scenario B control path must be clean");
  std::printf("scenario_b: offtrack at %.4f s\n", eb[0].t_first);

  const Scenario c = ScenarioC();
  const std::vector<Event> ec = AllScans(c);
  Require(ec.size() == 1 && ec[0].kind == EventKind::kAccelViolation,
          "scenario C must have exactly one acceleration event");
  Require(AllScans(ScenarioCBase()).empty(), "scenario C base must be clean");
  std::printf("scenario_c: a_comb exceeds limit from %.4f s, peak +%.3f\n",
              ec[0].t_first, ec[0].detail);

  const Scenario n = Nominal();
  Require(AllScans(n).empty(), "nominal scenario must be clean");

  WriteFile(scenarios / "scenario_a.scn.json", ExportScenario(a));
  WriteFile(scenarios / "scenario_b.scn.json", ExportScenario(b));
  WriteFile(scenarios / "scenario_c.scn.json", ExportScenario(c));
  WriteFile(scenarios / "nominal.scn.json", ExportScenario(n));
  WriteLabels(labels / "scenario_a.json", {{EventKind::kCollision,
                                            {"vut", "veh_2"},
                                            kTargetContact - 0.1,
                                            kTargetContact + 0.1}});
  WriteLabels(labels / "scenario_b.json", {LabelAround(eb[0], 0.2)});
  WriteLabels(labels / "scenario_c.json", {LabelAround(ec[0], 0.2)});
  WriteLabels(labels / "nominal.json", {});
  WriteFile(root / "tracks" / "track_a.csv", ExportBoundsCsv(a.track));
  return 0;
}

}  // namespace
}  // namespace scnforge

int main(int argc, char** argv) {
  try {
    return scnforge::Run(argc > 1 ? argv[1] : "fixtures");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make_fixtures: %s\n", e.what());
    return 1;
  }
}
