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

#include "scnforge/analysis_json.h"

#include <string>

#include "scnforge/error.h"

namespace scnforge {
namespace {

[[noreturn]] void LabelError(std::size_t i, const std::string& what) {
  throw Error(ErrorCode::kSchema, "label " + std::to_string(i) + ": " + what);
}

}  // namespace

Json EventToJson(const Event& event) {
  Json j = Json::object();
  j["kind"] = std::string(EventKindName(event.kind));
  j["t_first"] = Quantize(event.t_first);
  j["participants"] = event.participants;
  j["detail"] = Quantize(event.detail);
  if (event.t_peak) j["t_peak"] = Quantize(*event.t_peak);
  return j;
}

Json EventsToJson(std::span<const Event> events) {
  Json arr = Json::array();
  for (const Event& e : events) arr.push_back(EventToJson(e));
  return arr;
}

Json LabelToJson(const GroundTruthLabel& label) {
  return {{"kind", std::string(EventKindName(label.kind))},
          {"participants", label.participants},
          {"window", {label.t_lo, label.t_hi}}};
}

std::vector<GroundTruthLabel> LabelsFromJson(const Json& doc) {
  if (!doc.is_array()) {
    throw Error(ErrorCode::kSchema, "label file must hold a JSON array");
  }
  std::vector<GroundTruthLabel> labels;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const Json& j = doc[i];
    if (!j.is_object()) LabelError(i, "must be an object");
    GroundTruthLabel label;
    auto kind = j.find("kind");
    if (kind == j.end() || !kind->is_string()) {
      LabelError(i, "missing required field 'kind'");
    }
    const auto parsed = ParseEventKind(kind->get<std::string>());
    if (!parsed) LabelError(i, "unknown kind " + kind->dump());
    label.kind = *parsed;
    auto participants = j.find("participants");
    if (participants == j.end() || !participants->is_array()) {
      LabelError(i, "missing required field 'participants'");
    }
    for (const Json& id : *participants) {
      if (!id.is_string()) LabelError(i, "participants must be strings");
      label.participants.push_back(id.get<std::string>());
    }
    auto window = j.find("window");
    if (window == j.end() || !window->is_array() || window->size() != 2 ||
        !(*window)[0].is_number() || !(*window)[1].is_number()) {
      LabelError(i, "missing required field 'window' ([t_lo, t_hi])");
    }
    label.t_lo = (*window)[0].get<double>();
    label.t_hi = (*window)[1].get<double>();
    if (label.t_lo > label.t_hi) LabelError(i, "window has t_lo > t_hi");
    labels.push_back(std::move(label));
  }
  return labels;
}

std::vector<GroundTruthLabel> ParseLabels(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchema,
                std::string("malformed label file: ") + e.what());
  }
  return LabelsFromJson(doc);
}

Json VehicleStateToJson(std::string_view id, const VehicleState& state) {
  return {{"id", std::string(id)},
          {"t", Quantize(state.t)},
          {"x", Quantize(state.pos.x)},
          {"y", Quantize(state.pos.y)},
          {"theta", Quantize(state.theta)},
          {"v", Quantize(state.v)},
          {"a_lon", Quantize(state.a_lon)},
          {"a_lat", Quantize(state.a_lat)},
          {"a_comb", Quantize(state.a_comb)},
          {"stopped", state.stopped}};
}

Json VerdictToJson(const Verdict& verdict) {
  Json matched = Json::array(), missed = Json::array();
  for (const auto& l : verdict.matched) matched.push_back(LabelToJson(l));
  for (const auto& l : verdict.missed) missed.push_back(LabelToJson(l));
  return {{"pass", verdict.pass()},
          {"matched", matched},
          {"missed", missed},
          {"unexpected", EventsToJson(verdict.unexpected)}};
}

}  // namespace scnforge
