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

#ifndef SCNFORGE_CLI_H_
#define SCNFORGE_CLI_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "scnforge/analysis.h"

namespace scnforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIoError = 2;
inline constexpr int kExitUsage = 64;

// Bundled fixture root: $SCNFORGE_FIXTURES if set, else the install default.
std::filesystem::path FixtureDir();

// Reads a whole file; throws Error(kInvalidInput) when unreadable.
std::string ReadFile(const std::filesystem::path& path);

int RunValidate(const std::vector<std::string>& paths, std::ostream& out,
                std::ostream& err);

struct ScanOptions {
  bool collision = false;
  bool offtrack = false;
  std::optional<double> accel;
  double dt = kDefaultScanDt;
};

// No scan selected means all three, with the scenario's a_max as limit.
std::vector<Event> ScanScenario(const ResolvedScenario& rs,
                                const ScanOptions& options);

int RunScan(const std::string& path, const ScanOptions& options,
            std::ostream& out, std::ostream& err);

struct ScenarioVerdict {
  std::string name;
  std::optional<Verdict> verdict;
  std::string failure;  // set when the scenario could not be evaluated

  bool pass() const { return verdict && verdict->pass() && failure.empty(); }
};

struct CiReport {
  std::vector<ScenarioVerdict> scenarios;
  std::size_t passed = 0;
  std::size_t failed = 0;

  int exit_code() const { return failed == 0 ? kExitOk : kExitFailure; }
};

// Every `*.scn.json` under `scenario_dir` (sorted) is checked against
// `labels_dir/<stem>.json`.
CiReport RunCiChecks(const std::filesystem::path& scenario_dir,
                     const std::filesystem::path& labels_dir,
                     double dt = kDefaultScanDt);
void PrintCiReport(const CiReport& report, std::ostream& out);

int RunCi(const std::string& scenario_dir, const std::string& labels_dir,
          std::ostream& out, std::ostream& err);

struct ExportOptions {
  std::optional<double> grid;
  bool bounds_csv = false;
  bool states = false;
  std::optional<double> t;
  std::string output;  // empty: stdout
};

int RunExport(const std::string& path, const ExportOptions& options,
              std::ostream& out, std::ostream& err);

struct ServeOptions {
  std::string scenario;  // optional file to preload
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string ui_dir;
};

int RunServe(const ServeOptions& options, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to the subcommands.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace scnforge::cli

#endif  // SCNFORGE_CLI_H_
