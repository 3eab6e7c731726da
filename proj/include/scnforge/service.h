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

// Editing session behind the local HTTP/JSON API. Readers run concurrently;
// mutations are serialized. Every mutation returns the re-resolved document.

#ifndef SCNFORGE_SERVICE_H_
#define SCNFORGE_SERVICE_H_

#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scnforge/analysis.h"
#include "scnforge/scenario.h"
#include "scnforge/scenario_json.h"

namespace httplib {
class Server;
}

namespace scnforge::service {

// Thrown for unknown vehicle ids.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a mutation would introduce a new structural error; the session
// keeps its previous state.
class Rejected : public std::runtime_error {
 public:
  Rejected(const std::string& message, std::vector<Finding> findings)
      : std::runtime_error(message), findings_(std::move(findings)) {}
  const std::vector<Finding>& findings() const { return findings_; }

 private:
  std::vector<Finding> findings_;
};

// Blank scenario used when the service starts without a file.
Scenario EmptyScenario();

class Session {
 public:
  explicit Session(Scenario scenario = EmptyScenario());

  // Resolved document: the scenario file layout plus `findings` and a
  // per-vehicle `error` for vehicles that cannot be resolved.
  Json Document() const;

  Json Replace(const Json& doc);
  Json SetBounds(const Json& body);
  Json AddVehicle(const Json& body);
  Json RemoveVehicle(const std::string& id);
  Json InsertSupport(const std::string& id, const Json& body);
  Json MoveSupport(const std::string& id, const Json& body);
  Json DeleteSupport(const std::string& id, std::size_t index);
  Json PatchProfile(const std::string& id, const Json& body);

  // Per-vehicle states at `t` plus the VUT's trajectory over the planning
  // horizon starting at `t`.
  Json StateAt(double t) const;
  Json RunScans(const Json& body) const;
  std::string Grid(double resolution) const;

  Scenario scenario() const;

 private:
  struct Resolved {
    std::optional<Trajectory> trajectory;
    std::string error;
  };

  // Applies `edit` to a copy of the scenario; commits it unless it adds a
  // structural error other than a too-short support sequence. Caller must
  // not hold the lock.
  template <typename Edit>
  Json Mutate(Edit&& edit);

  static Resolved ResolveOne(const Scenario& sc, const VehicleEntry& v);
  Json DocumentLocked() const;
  ResolvedScenario RequireResolvedLocked() const;

  mutable std::shared_mutex mu_;
  Scenario scenario_;
  std::vector<Resolved> resolved_;  // aligned with scenario_.vehicles
};

// Registers the /api routes on `server`. `session` must outlive it.
void MountRoutes(httplib::Server& server, Session& session);

}  // namespace scnforge::service

#endif  // SCNFORGE_SERVICE_H_
