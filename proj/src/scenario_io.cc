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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "scnforge/error.h"
#include "scnforge/scenario.h"
#include "scnforge/scenario_json.h"

namespace scnforge {
namespace {

constexpr std::string_view kCsvHeader = "x_left;y_left;x_right;y_right";

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void CsvError(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse,
              "bounds CSV line " + std::to_string(line) + ": " + what);
}

double ParseCsvNumber(std::string_view field, std::size_t line) {
  field = Trim(field);
  double value = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end ||
      !std::isfinite(value)) {
    CsvError(line, "malformed number '" + std::string(field) + "'");
  }
  return value;
}

// --- JSON field access -----------------------------------------------------

[[noreturn]] void SchemaError(const std::string& message) {
  throw Error(ErrorCode::kSchema, message);
}

std::string Join(const std::string& where, std::string_view key) {
  return where.empty() ? std::string(key) : where + "." + std::string(key);
}

const Json& Field(const Json& obj, std::string_view key,
                  const std::string& where) {
  if (!obj.is_object()) SchemaError("'" + where + "' must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    SchemaError("missing required field '" + Join(where, key) + "'");
  }
  return *it;
}

double AsNumber(const Json& j, const std::string& where) {
  if (!j.is_number()) SchemaError("field '" + where + "' must be a number");
  return j.get<double>();
}

double NumberField(const Json& obj, std::string_view key,
                   const std::string& where) {
  return AsNumber(Field(obj, key, where), Join(where, key));
}

std::string StringField(const Json& obj, std::string_view key,
                        const std::string& where) {
  const Json& j = Field(obj, key, where);
  if (!j.is_string()) {
    SchemaError("field '" + Join(where, key) + "' must be a string");
  }
  return j.get<std::string>();
}

std::optional<double> OptionalNumber(const Json& obj, std::string_view key,
                                     const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return AsNumber(*it, Join(where, key));
}

const std::vector<std::string_view> kTableColumns = {
    "t", "x", "y", "theta", "kappa", "v", "a_lon", "a_lat", "a_comb"};

std::vector<double> Column(const Trajectory& traj, std::string_view name) {
  const std::size_t n = traj.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double value = 0.0;
    if (name == "t")
      value = traj.t[i];
    else if (name == "x")
      value = traj.path.pts[i].x;
    else if (name == "y")
      value = traj.path.pts[i].y;
    else if (name == "theta")
      value = traj.path.theta[i];
    else if (name == "kappa")
      value = traj.path.kappa[i];
    else if (name == "v")
      value = traj.profile.v[i];
    else if (name == "a_lon")
      value = traj.a_lon[i];
    else if (name == "a_lat")
      value = traj.a_lat[i];
    else
      value = traj.a_comb[i];
    out[i] = Quantize(value);
  }
  return out;
}

// Empty string if the stored table matches `traj`.
std::string TableMismatch(const Json& stored, const Trajectory& traj,
                          const std::string& where) {
  if (!stored.is_object()) SchemaError("'" + where + "' must be an object");
  double worst = 0.0;
  std::string worst_column;
  for (std::string_view name : kTableColumns) {
    const Json& col = Field(stored, name, where);
    if (!col.is_array()) {
      SchemaError("field '" + Join(where, name) + "' must be an array");
    }
    const std::vector<double> fresh = Column(traj, name);
    if (col.size() != fresh.size()) {
      return "stored table has " + std::to_string(col.size()) +
             " rows, recomputed " + std::to_string(fresh.size());
    }
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      const double d = std::abs(AsNumber(col[i], Join(where, name)) - fresh[i]);
      if (d > worst) {
        worst = d;
        worst_column = std::string(name);
      }
    }
  }
  if (worst > kStalenessTolerance) {
    std::ostringstream msg;
    msg << "stored column '" << worst_column << "' deviates by " << worst
        << " from the recomputed trajectory";
    return msg.str();
  }
  return {};
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), Quantize(value));
  return std::string(buf, ptr);
}

TrackBounds ImportBoundsCsv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  TrackBounds track;
  bool left_done = false, right_done = false;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    const std::string_view line = Trim(raw);
    if (!header_seen) {
      if (line != kCsvHeader) {
        CsvError(line_no, "expected header '" + std::string(kCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const auto sep = rest.find(';');
      fields.push_back(Trim(rest.substr(0, sep)));
      if (sep == std::string_view::npos) break;
      rest.remove_prefix(sep + 1);
    }
    if (fields.size() != 4) {
      CsvError(line_no,
               "expected 4 fields, got " + std::to_string(fields.size()));
    }
    auto take = [&](std::string_view fx, std::string_view fy, bool& done,
                    std::vector<Point2>& out, const char* side) {
      if (fx.empty() && fy.empty()) {
        done = true;
        return;
      }
      if (fx.empty() || fy.empty()) {
        CsvError(line_no, std::string("incomplete ") + side + " point");
      }
      if (done) {
        CsvError(line_no, std::string(side) + " bound resumes after a gap");
      }
      out.push_back({ParseCsvNumber(fx, line_no), ParseCsvNumber(fy, line_no)});
    };
    take(fields[0], fields[1], left_done, track.left, "left");
    take(fields[2], fields[3], right_done, track.right, "right");
  }
  if (!header_seen) CsvError(1, "empty input");
  if (track.left.size() < 2 || track.right.size() < 2) {
    throw Error(ErrorCode::kInvalidTrack,
                "each bound needs at least 2 points (left " +
                    std::to_string(track.left.size()) + ", right " +
                    std::to_string(track.right.size()) + ")");
  }
  return track;
}

std::string ExportBoundsCsv(const TrackBounds& track) {
  std::string out(kCsvHeader);
  out += '\n';
  const std::size_t rows = std::max(track.left.size(), track.right.size());
  auto pair = [](const std::vector<Point2>& pts, std::size_t i) {
    if (i >= pts.size()) return std::string(";");
    return FormatNumber(pts[i].x) + ";" + FormatNumber(pts[i].y);
  };
  for (std::size_t i = 0; i < rows; ++i) {
    out += pair(track.left, i) + ";" + pair(track.right, i) + "\n";
  }
  return out;
}

Json PointsToJson(const std::vector<Point2>& points) {
  Json arr = Json::array();
  for (const Point2& p : points) {
    arr.push_back(Json::array({Quantize(p.x), Quantize(p.y)}));
  }
  return arr;
}

std::vector<Point2> PointsFromJson(const Json& j, const std::string& where) {
  if (!j.is_array()) SchemaError("field '" + where + "' must be an array");
  std::vector<Point2> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string item = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) {
      SchemaError("field '" + item + "' must be an [x, y] pair");
    }
    out.push_back({AsNumber(j[i][0], item), AsNumber(j[i][1], item)});
  }
  return out;
}

Json TrajectoryToJson(const Trajectory& traj) {
  Json table = Json::object();
  for (std::string_view name : kTableColumns) {
    table[std::string(name)] = Column(traj, name);
  }
  return table;
}

Json ScenarioToJson(
    const Scenario& sc,
    const std::vector<std::optional<Trajectory>>& trajectories) {
  Json doc = Json::object();
  doc["schema_version"] = std::string(kSchemaVersion);
  doc["name"] = sc.name;
  doc["friction"] = {{"a_max", Quantize(sc.friction.a_max)},
                     {"v_lim", Quantize(sc.friction.v_lim)}};
  doc["planning_horizon_s"] = Quantize(sc.planning_horizon);
  doc["sampling_step_m"] = Quantize(sc.sampling_step);
  doc["track"] = {{"left", PointsToJson(sc.track.left)},
                  {"right", PointsToJson(sc.track.right)}};
  if (!sc.raceline.empty()) doc["raceline"] = PointsToJson(sc.raceline);

  Json vehicles = Json::array();
  for (std::size_t i = 0; i < sc.vehicles.size(); ++i) {
    const VehicleEntry& v = sc.vehicles[i];
    Json jv = Json::object();
    jv["id"] = v.spec.id;
    jv["is_vut"] = v.spec.is_vut;
    jv["length_m"] = Quantize(v.spec.length);
    jv["width_m"] = Quantize(v.spec.width);
    jv["color"] = v.spec.color;
    jv["v_start"] = v.v_start ? Json(Quantize(*v.v_start)) : Json(nullptr);
    jv["v_end"] = v.v_end ? Json(Quantize(*v.v_end)) : Json(nullptr);
    jv["support"] = PointsToJson(v.support);
    Json edits = Json::array();
    for (const ProfileEdit& e : v.profile_edits) {
      edits.push_back(Json::array({Quantize(e.s), Quantize(e.v)}));
    }
    jv["profile_edits"] = std::move(edits);
    if (i < trajectories.size() && trajectories[i]) {
      jv["trajectory"] = TrajectoryToJson(*trajectories[i]);
    } else {
      jv["trajectory"] = nullptr;
    }
    vehicles.push_back(std::move(jv));
  }
  doc["vehicles"] = std::move(vehicles);
  return doc;
}

Scenario ScenarioFromJson(const Json& doc) {
  if (!doc.is_object()) SchemaError("document must be a JSON object");
  const Json& version = Field(doc, "schema_version", "");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported schema_version " + version.dump());
  }
  Scenario sc;
  sc.name = StringField(doc, "name", "");
  const Json& friction = Field(doc, "friction", "");
  sc.friction.a_max = NumberField(friction, "a_max", "friction");
  sc.friction.v_lim = NumberField(friction, "v_lim", "friction");
  sc.planning_horizon = NumberField(doc, "planning_horizon_s", "");
  sc.sampling_step = NumberField(doc, "sampling_step_m", "");
  const Json& track = Field(doc, "track", "");
  sc.track.left = PointsFromJson(Field(track, "left", "track"), "track.left");
  sc.track.right =
      PointsFromJson(Field(track, "right", "track"), "track.right");
  if (auto it = doc.find("raceline"); it != doc.end() && !it->is_null()) {
    sc.raceline = PointsFromJson(*it, "raceline");
  }

  const Json& vehicles = Field(doc, "vehicles", "");
  if (!vehicles.is_array()) SchemaError("field 'vehicles' must be an array");
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const std::string where = "vehicles[" + std::to_string(i) + "]";
    const Json& jv = vehicles[i];
    VehicleEntry v;
    v.spec.id = StringField(jv, "id", where);
    const Json& is_vut = Field(jv, "is_vut", where);
    if (!is_vut.is_boolean()) {
      SchemaError("field '" + where + ".is_vut' must be a boolean");
    }
    v.spec.is_vut = is_vut.get<bool>();
    v.spec.length = NumberField(jv, "length_m", where);
    v.spec.width = NumberField(jv, "width_m", where);
    v.spec.color = StringField(jv, "color", where);
    v.v_start = OptionalNumber(jv, "v_start", where);
    v.v_end = OptionalNumber(jv, "v_end", where);
    v.support = PointsFromJson(Field(jv, "support", where), where + ".support");
    const Json& edits = Field(jv, "profile_edits", where);
    if (!edits.is_array()) {
      SchemaError("field '" + where + ".profile_edits' must be an array");
    }
    for (const Point2& p : PointsFromJson(edits, where + ".profile_edits")) {
      v.profile_edits.push_back({p.x, p.y});
    }
    sc.vehicles.push_back(std::move(v));
  }
  return sc;
}

std::string ExportScenario(const Scenario& sc) {
  const Scenario q = Quantized(sc);
  const std::vector<Finding> findings = ValidateScenario(q);
  if (HasErrors(findings)) {
    std::string reason = "scenario '" + q.name + "' is invalid:";
    for (const Finding& f : findings) {
      if (f.severity == Severity::kError)
        reason += " [" + f.code + "] " + f.message + ";";
    }
    throw Error(ErrorCode::kExportRefused, reason);
  }
  std::vector<std::optional<Trajectory>> trajectories;
  for (const VehicleEntry& v : q.vehicles) {
    try {
      trajectories.emplace_back(ResolveVehicle(q, v));
    } catch (const Error& e) {
      throw Error(ErrorCode::kExportRefused,
                  "vehicle '" + v.spec.id + "' has no trajectory: " + e.what());
    }
  }
  return ScenarioToJson(q, trajectories).dump(2) + "\n";
}

ImportResult ImportScenario(std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchema,
                std::string("malformed scenario document: ") + e.what());
  }
  ImportResult result;
  result.scenario = ScenarioFromJson(doc);

  const Json& vehicles = doc["vehicles"];
  for (std::size_t i = 0; i < result.scenario.vehicles.size(); ++i) {
    const VehicleEntry& v = result.scenario.vehicles[i];
    auto it = vehicles[i].find("trajectory");
    if (it == vehicles[i].end() || it->is_null()) continue;
    const std::string where = "vehicles[" + std::to_string(i) + "].trajectory";
    std::string problem;
    try {
      problem = TableMismatch(*it, ResolveVehicle(result.scenario, v), where);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSchema) throw;
      problem = std::string("trajectory cannot be recomputed: ") + e.what();
    }
    if (!problem.empty()) {
      result.warnings.push_back("stale trajectory for vehicle '" + v.spec.id +
                                "': " + problem);
    }
  }
  return result;
}

}  // namespace scnforge
