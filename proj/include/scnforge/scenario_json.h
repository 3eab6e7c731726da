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

// JSON mapping of the scenario document, shared by file I/O, the CLI and the
// service.

#ifndef SCNFORGE_SCENARIO_JSON_H_
#define SCNFORGE_SCENARIO_JSON_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scnforge/scenario.h"

namespace scnforge {

using Json = nlohmann::ordered_json;

// Shortest decimal text of Quantize(value).
std::string FormatNumber(double value);

Json PointsToJson(const std::vector<Point2>& points);
std::vector<Point2> PointsFromJson(const Json& j, const std::string& where);

// Stored trajectory table; values quantized.
Json TrajectoryToJson(const Trajectory& traj);

// Document with one optional trajectory per vehicle. A missing trajectory is
// written as null.
Json ScenarioToJson(const Scenario& sc,
                    const std::vector<std::optional<Trajectory>>& trajectories);

// Authoring fields only; stored trajectories are ignored. Throws kSchema or
// kUnsupportedVersion.
Scenario ScenarioFromJson(const Json& doc);

}  // namespace scnforge

#endif  // SCNFORGE_SCENARIO_JSON_H_
