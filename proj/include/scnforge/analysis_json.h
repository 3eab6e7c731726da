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

#ifndef SCNFORGE_ANALYSIS_JSON_H_
#define SCNFORGE_ANALYSIS_JSON_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scnforge/analysis.h"
#include "scnforge/scenario_json.h"

namespace scnforge {

Json EventToJson(const Event& event);
Json EventsToJson(std::span<const Event> events);

Json LabelToJson(const GroundTruthLabel& label);
// Label file: [{kind, participants: [ids], window: [t_lo, t_hi]}].
std::vector<GroundTruthLabel> LabelsFromJson(const Json& doc);
std::vector<GroundTruthLabel> ParseLabels(std::string_view text);

Json VehicleStateToJson(std::string_view id, const VehicleState& state);

Json VerdictToJson(const Verdict& verdict);

}  // namespace scnforge

#endif  // SCNFORGE_ANALYSIS_JSON_H_
