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

#include "scnforge/service.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <string>

#include "httplib.h"
#include "scnforge/analysis_json.h"
#include "scnforge/error.h"

namespace scnforge::service {
namespace {

[[noreturn]] void BadRequest(const std::string& message) {
  throw Error(ErrorCode::kInvalidInput, message);
}

Json ParseBody(const std::string& body) {
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    BadRequest(std::string("request body is not valid JSON: ") + e.what());
  }
}

Point2 PointFrom(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    BadRequest(std::string(what) + " must be an [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::size_t IndexFrom(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    BadRequest(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(j.get<long long>());
}

const Json& Require(const Json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    BadRequest(std::string("request body needs field '") + key + "'");
  }
  return body.at(key);
}

std::set<std::pair<std::string, std::string>> ErrorKeys(
    const std::vector<Finding>& findings) {
  std::set<std::pair<std::string, std::string>> keys;
  for (const Finding& f : findings) {
    if (f.severity == Severity::kError) keys.emplace(f.code, f.message);
  }
  return keys;
}

Json FindingsToJson(const std::vector<Finding>& findings) {
  Json arr = Json::array();
  for (const Finding& f : findings) {
    arr.push_back(
        {{"severity", f.severity == Severity::kError ? "error" : "warning"},
         {"code", f.code},
         {"message", f.message}});
  }
  return arr;
}

void SendJson(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Handler>
void Guarded(httplib::Response& res, Handler&& handler) {
  try {
    handler();
  } catch (const NotFound& e) {
    SendJson(res, {{"error", "not-found"}, {"message", e.what()}}, 404);
  } catch (const Rejected& e) {
    SendJson(res,
             {{"error", "rejected"},
              {"message", e.what()},
              {"findings", FindingsToJson(e.findings())}},
             422);
  } catch (const Error& e) {
    int status = 400;
    if (e.code() == ErrorCode::kExportRefused) status = 409;
    if (e.code() == ErrorCode::kDegenerateGeometry) status = 422;
    if (e.code() == ErrorCode::kInternal) status = 500;
    SendJson(res,
             {{"error", std::string(ErrorCodeName(e.code()))},
              {"message", e.what()}},
             status);
  } catch (const Json::exception& e) {
    SendJson(res, {{"error", "schema-error"}, {"message", e.what()}}, 400);
  } catch (const std::exception& e) {
    SendJson(res, {{"error", "internal-error"}, {"message", e.what()}}, 500);
  }
}

double QueryNumber(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) {
    BadRequest(std::string("missing query parameter '") + key + "'");
  }
  const std::string text = req.get_param_value(key);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(value)) {
    BadRequest(std::string("query parameter '") + key + "' must be a number");
  }
  return value;
}

}  // namespace

Scenario EmptyScenario() {
  Scenario sc;
  sc.name = "untitled";
  return sc;
}

Session::Session(Scenario scenario) : scenario_(std::move(scenario)) {
  for (const VehicleEntry& v : scenario_.vehicles) {
    resolved_.push_back(ResolveOne(scenario_, v));
  }
}

Session::Resolved Session::ResolveOne(const Scenario& sc,
                                      const VehicleEntry& v) {
  Resolved r;
  try {
    r.trajectory = ResolveVehicle(sc, v);
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

Scenario Session::scenario() const {
  std::shared_lock lock(mu_);
  return scenario_;
}

Json Session::Document() const {
  std::shared_lock lock(mu_);
  return DocumentLocked();
}

Json Session::DocumentLocked() const {
  std::vector<std::optional<Trajectory>> trajectories;
  for (const Resolved& r : resolved_) trajectories.push_back(r.trajectory);
  Json doc = ScenarioToJson(scenario_, trajectories);
  for (std::size_t i = 0; i < resolved_.size(); ++i) {
    if (!resolved_[i].trajectory) {
      doc["vehicles"][i]["error"] = resolved_[i].error;
    }
  }
  doc["findings"] = FindingsToJson(ValidateScenario(scenario_));
  return doc;
}

ResolvedScenario Session::RequireResolvedLocked() const {
  ResolvedScenario rs;
  rs.scenario = scenario_;
  for (std::size_t i = 0; i < resolved_.size(); ++i) {
    if (!resolved_[i].trajectory) {
      throw Error(ErrorCode::kExportRefused,
                  "vehicle '" + scenario_.vehicles[i].spec.id +
                      "' is unresolved: " + resolved_[i].error);
    }
    rs.trajectories.push_back(*resolved_[i].trajectory);
  }
  return rs;
}

template <typename Edit>
Json Session::Mutate(Edit&& edit) {
  std::unique_lock lock(mu_);
  Scenario next = scenario_;
  edit(next);

  const auto before = ErrorKeys(ValidateScenario(scenario_));
  const std::vector<Finding> after = ValidateScenario(next);
  std::vector<Finding> introduced;
  for (const Finding& f : after) {
    if (f.severity != Severity::kError || f.code == "support-too-short") {
      continue;
    }
    if (!before.count({f.code, f.message})) introduced.push_back(f);
  }
  if (!introduced.empty()) {
    throw Rejected("edit introduces " + std::to_string(introduced.size()) +
                       " structural error(s)",
                   std::move(introduced));
  }

  const bool settings_same = next.friction == scenario_.friction &&
                             next.sampling_step == scenario_.sampling_step;
  std::vector<Resolved> resolved;
  for (const VehicleEntry& v : next.vehicles) {
    const VehicleEntry* old = scenario_.FindVehicle(v.spec.id);
    if (settings_same && old != nullptr && *old == v) {
      resolved.push_back(
          resolved_[static_cast<std::size_t>(old - scenario_.vehicles.data())]);
      continue;
    }
    Resolved r = ResolveOne(next, v);
    const bool was_resolved =
        old != nullptr &&
        resolved_[static_cast<std::size_t>(old - scenario_.vehicles.data())]
            .trajectory.has_value();
    if (!r.trajectory && was_resolved && v.support.size() >= 3) {
      throw Rejected("vehicle '" + v.spec.id + "' no longer resolves",
                     {{Severity::kError, "unresolvable", r.error}});
    }
    resolved.push_back(std::move(r));
  }
  scenario_ = std::move(next);
  resolved_ = std::move(resolved);
  return DocumentLocked();
}

Json Session::Replace(const Json& doc) {
  Scenario incoming = ScenarioFromJson(doc);
  std::unique_lock lock(mu_);
  scenario_ = std::move(incoming);
  resolved_.clear();
  for (const VehicleEntry& v : scenario_.vehicles) {
    resolved_.push_back(ResolveOne(scenario_, v));
  }
  return DocumentLocked();
}

Json Session::SetBounds(const Json& body) {
  TrackBounds track;
  if (body.is_object() && body.contains("csv")) {
    if (!body["csv"].is_string()) BadRequest("'csv' must be a string");
    track = ImportBoundsCsv(body["csv"].get<std::string>());
  } else {
    track.left = PointsFromJson(Require(body, "left"), "left");
    track.right = PointsFromJson(Require(body, "right"), "right");
  }
  return Mutate([&](Scenario& sc) { sc.track = track; });
}

Json Session::AddVehicle(const Json& body) {
  const Json& id = Require(body, "id");
  if (!id.is_string()) BadRequest("'id' must be a string");
  VehicleEntry v;
  v.spec.id = id.get<std::string>();
  if (body.contains("is_vut")) v.spec.is_vut = body["is_vut"].get<bool>();
  if (body.contains("length_m")) v.spec.length = body["length_m"].get<double>();
  if (body.contains("width_m")) v.spec.width = body["width_m"].get<double>();
  if (body.contains("color")) v.spec.color = body["color"].get<std::string>();
  if (body.contains("support")) {
    v.support = PointsFromJson(body["support"], "support");
  }
  return Mutate([&](Scenario& sc) { sc.vehicles.push_back(v); });
}

Json Session::RemoveVehicle(const std::string& id) {
  return Mutate([&](Scenario& sc) {
    auto it =
        std::find_if(sc.vehicles.begin(), sc.vehicles.end(),
                     [&](const VehicleEntry& v) { return v.spec.id == id; });
    if (it == sc.vehicles.end()) throw NotFound("no vehicle '" + id + "'");
    sc.vehicles.erase(it);
  });
}

Json Session::InsertSupport(const std::string& id, const Json& body) {
  const Point2 p = PointFrom(Require(body, "point"), "point");
  std::optional<std::size_t> index;
  if (body.contains("index")) index = IndexFrom(body["index"], "index");
  return Mutate([&](Scenario& sc) {
    VehicleEntry* v = sc.FindVehicle(id);
    if (v == nullptr) throw NotFound("no vehicle '" + id + "'");
    const std::size_t at = index.value_or(v->support.size());
    if (at > v->support.size()) BadRequest("support index out of range");
    v->support.insert(v->support.begin() + static_cast<std::ptrdiff_t>(at), p);
  });
}

Json Session::MoveSupport(const std::string& id, const Json& body) {
  const std::size_t index = IndexFrom(Require(body, "index"), "index");
  const Point2 p = PointFrom(Require(body, "point"), "point");
  return Mutate([&](Scenario& sc) {
    VehicleEntry* v = sc.FindVehicle(id);
    if (v == nullptr) throw NotFound("no vehicle '" + id + "'");
    if (index >= v->support.size()) BadRequest("support index out of range");
    v->support[index] = p;
  });
}

Json Session::DeleteSupport(const std::string& id, std::size_t index) {
  return Mutate([&](Scenario& sc) {
    VehicleEntry* v = sc.FindVehicle(id);
    if (v == nullptr) throw NotFound("no vehicle '" + id + "'");
    if (index >= v->support.size()) BadRequest("support index out of range");
    v->support.erase(v->support.begin() + static_cast<std::ptrdiff_t>(index));
  });
}

Json Session::PatchProfile(const std::string& id, const Json& body) {
  std::vector<ProfileEdit> batch;
  for (const Point2& p : PointsFromJson(Require(body, "edits"), "edits")) {
    if (!(p.y >= 0.0)) BadRequest("edit speeds must be >= 0");
    batch.push_back({p.x, p.y});
  }
  const bool replace = body.value("replace", false);
  return Mutate([&](Scenario& sc) {
    VehicleEntry* v = sc.FindVehicle(id);
    if (v == nullptr) throw NotFound("no vehicle '" + id + "'");
    if (replace) v->profile_edits.clear();
    if (batch.empty()) return;
    const auto [lo, hi] = std::minmax_element(
        batch.begin(), batch.end(),
        [](const ProfileEdit& a, const ProfileEdit& b) { return a.s < b.s; });
    const double s_lo = lo->s, s_hi = hi->s;
    std::erase_if(v->profile_edits, [&](const ProfileEdit& e) {
      return e.s >= s_lo && e.s <= s_hi;
    });
    v->profile_edits.insert(v->profile_edits.end(), batch.begin(), batch.end());
    std::stable_sort(
        v->profile_edits.begin(), v->profile_edits.end(),
        [](const ProfileEdit& a, const ProfileEdit& b) { return a.s < b.s; });
  });
}

Json Session::StateAt(double t) const {
  std::shared_lock lock(mu_);
  Json vehicles = Json::array();
  Json horizon = nullptr;
  for (std::size_t i = 0; i < scenario_.vehicles.size(); ++i) {
    const VehicleEntry& v = scenario_.vehicles[i];
    const Resolved& r = resolved_[i];
    if (!r.trajectory) {
      vehicles.push_back({{"id", v.spec.id}, {"error", r.error}});
      continue;
    }
    vehicles.push_back(
        VehicleStateToJson(v.spec.id, StateAtTime(*r.trajectory, t)));
    if (!v.spec.is_vut) continue;

    // Rows inside [t, t + horizon], with interpolated end points.
    const Trajectory& traj = *r.trajectory;
    const double t_end = t + scenario_.planning_horizon;
    Json ts = Json::array(), xs = Json::array(), ys = Json::array();
    auto add = [&](const VehicleState& s) {
      ts.push_back(Quantize(s.t));
      xs.push_back(Quantize(s.pos.x));
      ys.push_back(Quantize(s.pos.y));
    };
    add(StateAtTime(traj, t));
    for (std::size_t k = 0; k < traj.size(); ++k) {
      if (traj.t[k] > t && traj.t[k] < t_end) add(StateAtTime(traj, traj.t[k]));
    }
    if (t_end <= traj.duration()) add(StateAtTime(traj, t_end));
    horizon = {{"id", v.spec.id}, {"t", ts}, {"x", xs}, {"y", ys}};
  }
  return {{"t", Quantize(t)}, {"vehicles", vehicles}, {"vut_horizon", horizon}};
}

Json Session::RunScans(const Json& body) const {
  const bool any =
      body.is_object() && (body.contains("collision") ||
                           body.contains("offtrack") || body.contains("accel"));
  const bool collision = !any || body.value("collision", false);
  const bool offtrack = !any || body.value("offtrack", false);
  double dt = kDefaultScanDt;
  if (body.is_object() && body.contains("dt")) {
    if (!body["dt"].is_number() || !(body["dt"].get<double>() > 0.0)) {
      BadRequest("'dt' must be a positive number");
    }
    dt = body["dt"].get<double>();
  }

  std::shared_lock lock(mu_);
  const ResolvedScenario rs = RequireResolvedLocked();
  std::optional<double> accel;
  if (!any) accel = scenario_.friction.a_max;
  if (any && body.contains("accel") && !body["accel"].is_null()) {
    if (!body["accel"].is_number()) BadRequest("'accel' must be a number");
    accel = body["accel"].get<double>();
  }
  std::vector<Event> events;
  if (collision) {
    for (Event& e : CollisionScan(rs, dt)) events.push_back(std::move(e));
  }
  if (offtrack) {
    for (Event& e : OfftrackScan(rs, dt)) events.push_back(std::move(e));
  }
  if (accel) {
    for (Event& e : AccelLimitScan(rs, *accel)) events.push_back(std::move(e));
  }
  return EventsToJson(events);
}

std::string Session::Grid(double resolution) const {
  std::shared_lock lock(mu_);
  return FormatOccupancyGrid(MakeOccupancyGrid(scenario_.track, resolution));
}

void MountRoutes(httplib::Server& server, Session& session) {
  using httplib::Request;
  using httplib::Response;

  server.Get("/api/scenario", [&](const Request&, Response& res) {
    Guarded(res, [&] { SendJson(res, session.Document()); });
  });
  server.Put("/api/scenario", [&](const Request& req, Response& res) {
    Guarded(res, [&] { SendJson(res, session.Replace(ParseBody(req.body))); });
  });
  server.Post("/api/track/bounds", [&](const Request& req, Response& res) {
    Guarded(res,
            [&] { SendJson(res, session.SetBounds(ParseBody(req.body))); });
  });
  server.Post("/api/vehicles", [&](const Request& req, Response& res) {
    Guarded(res,
            [&] { SendJson(res, session.AddVehicle(ParseBody(req.body))); });
  });
  server.Delete(R"(/api/vehicles/([^/]+))", [&](const Request& req,
                                                Response& res) {
    Guarded(res, [&] { SendJson(res, session.RemoveVehicle(req.matches[1])); });
  });
  server.Post(R"(/api/vehicles/([^/]+)/support)", [&](const Request& req,
                                                      Response& res) {
    Guarded(res, [&] {
      SendJson(res, session.InsertSupport(req.matches[1], ParseBody(req.body)));
    });
  });
  server.Patch(R"(/api/vehicles/([^/]+)/support)", [&](const Request& req,
                                                       Response& res) {
    Guarded(res, [&] {
      SendJson(res, session.MoveSupport(req.matches[1], ParseBody(req.body)));
    });
  });
  server.Delete(R"(/api/vehicles/([^/]+)/support)", [&](const Request& req,
                                                        Response& res) {
    Guarded(res, [&] {
      const double index = QueryNumber(req, "index");
      if (index < 0.0 || index != std::floor(index)) {
        BadRequest("'index' must be a non-negative integer");
      }
      SendJson(res, session.DeleteSupport(req.matches[1],
                                          static_cast<std::size_t>(index)));
    });
  });
  server.Patch(R"(/api/vehicles/([^/]+)/profile)", [&](const Request& req,
                                                       Response& res) {
    Guarded(res, [&] {
      SendJson(res, session.PatchProfile(req.matches[1], ParseBody(req.body)));
    });
  });
  server.Get("/api/state", [&](const Request& req, Response& res) {
    Guarded(res, [&] {
      const double t = QueryNumber(req, "t");
      if (t < 0.0) BadRequest("'t' must be >= 0");
      SendJson(res, session.StateAt(t));
    });
  });
  server.Post("/api/scans", [&](const Request& req, Response& res) {
    Guarded(res, [&] {
      const Json body = req.body.empty() ? Json::object() : ParseBody(req.body);
      SendJson(res, session.RunScans(body));
    });
  });
  server.Get("/api/export/grid", [&](const Request& req, Response& res) {
    Guarded(res, [&] {
      const double resolution = req.has_param("res") ? QueryNumber(req, "res")
                                                     : kDefaultGridResolution;
      if (!(resolution > 0.0)) BadRequest("'res' must be > 0");
      res.set_content(session.Grid(resolution), "text/plain");
    });
  });
}

}  // namespace scnforge::service
