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

#include "scnforge/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "scnforge/analysis_json.h"
#include "scnforge/error.h"
#include "scnforge/scenario.h"
#include "scnforge/service.h"

#ifndef SCNFORGE_DEFAULT_FIXTURE_DIR
#define SCNFORGE_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace scnforge::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kScenarioSuffix = ".scn.json";

std::string Stem(const fs::path& path) {
  std::string name = path.filename().string();
  if (name.ends_with(kScenarioSuffix)) {
    name.resize(name.size() - kScenarioSuffix.size());
  }
  return name;
}

ResolvedScenario LoadResolved(const std::string& path, std::ostream& err) {
  ImportResult imported = ImportScenario(ReadFile(path));
  for (const std::string& w : imported.warnings) {
    err << path << ": warning: " << w << "\n";
  }
  return Resolve(imported.scenario);
}

std::string DescribeLabel(const GroundTruthLabel& label) {
  std::ostringstream s;
  s << EventKindName(label.kind) << " [";
  for (std::size_t i = 0; i < label.participants.size(); ++i) {
    s << (i ? ", " : "") << label.participants[i];
  }
  s << "] window [" << label.t_lo << ", " << label.t_hi << "]";
  return s.str();
}

std::string DescribeEvent(const Event& event) {
  std::ostringstream s;
  s << EventKindName(event.kind) << " [";
  for (std::size_t i = 0; i < event.participants.size(); ++i) {
    s << (i ? ", " : "") << event.participants[i];
  }
  s << "] t=" << FormatNumber(event.t_first);
  return s.str();
}

int WriteOutput(const std::string& text, const std::string& output,
                std::ostream& out, std::ostream& err) {
  if (output.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(output, std::ios::binary);
  file << text;
  if (!file) {
    err << output << ": io-error: cannot write file\n";
    return kExitIoError;
  }
  return kExitOk;
}

}  // namespace

fs::path FixtureDir() {
  if (const char* env = std::getenv("SCNFORGE_FIXTURES"); env && *env) {
    return env;
  }
  return SCNFORGE_DEFAULT_FIXTURE_DIR;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in || fs::is_directory(path)) {
    throw Error(ErrorCode::kInvalidInput,
                "cannot read file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int RunValidate(const std::vector<std::string>& paths, std::ostream& out,
                std::ostream& err) {
  int code = kExitOk;
  for (const std::string& path : paths) {
    std::string text;
    try {
      text = ReadFile(path);
    } catch (const Error& e) {
      err << path << ": io-error: " << e.what() << "\n";
      code = std::max(code, kExitIoError);
      continue;
    }
    try {
      const ImportResult imported = ImportScenario(text);
      for (const std::string& w : imported.warnings) {
        out << path << ": warning: " << w << "\n";
      }
      const std::vector<Finding> findings = ValidateScenario(imported.scenario);
      for (const Finding& f : findings) {
        out << path << ": "
            << (f.severity == Severity::kError ? "error" : "warning") << " ["
            << f.code << "] " << f.message << "\n";
      }
      if (HasErrors(findings)) {
        code = std::max(code, kExitFailure);
      } else {
        out << path << ": ok\n";
      }
    } catch (const Error& e) {
      out << path << ": error [" << ErrorCodeName(e.code()) << "] " << e.what()
          << "\n";
      code = std::max(code, kExitFailure);
    }
  }
  return code;
}

std::vector<Event> ScanScenario(const ResolvedScenario& rs,
                                const ScanOptions& options) {
  const bool all = !options.collision && !options.offtrack && !options.accel;
  std::vector<Event> events;
  if (all || options.collision) {
    for (Event& e : CollisionScan(rs, options.dt)) events.push_back(e);
  }
  if (all || options.offtrack) {
    for (Event& e : OfftrackScan(rs, options.dt)) events.push_back(e);
  }
  if (all || options.accel) {
    const double limit = options.accel.value_or(rs.scenario.friction.a_max);
    for (Event& e : AccelLimitScan(rs, limit)) events.push_back(e);
  }
  return events;
}

int RunScan(const std::string& path, const ScanOptions& options,
            std::ostream& out, std::ostream& err) {
  ResolvedScenario rs;
  try {
    rs = LoadResolved(path, err);
  } catch (const Error& e) {
    err << path << ": " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidInput ? kExitIoError : kExitFailure;
  }
  out << EventsToJson(ScanScenario(rs, options)).dump(2) << "\n";
  return kExitOk;
}

CiReport RunCiChecks(const fs::path& scenario_dir, const fs::path& labels_dir,
                     double dt) {
  CiReport report;
  std::vector<fs::path> files;
  if (fs::is_directory(scenario_dir)) {
    for (const auto& entry : fs::directory_iterator(scenario_dir)) {
      if (entry.is_regular_file() &&
          entry.path().filename().string().ends_with(kScenarioSuffix)) {
        files.push_back(entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());

  for (const fs::path& file : files) {
    ScenarioVerdict sv;
    sv.name = Stem(file);
    const fs::path label_file = labels_dir / (sv.name + ".json");
    try {
      if (!fs::exists(label_file)) {
        sv.failure = "no label file " + label_file.string();
      } else {
        const auto labels = ParseLabels(ReadFile(label_file));
        const ImportResult imported = ImportScenario(ReadFile(file));
        const ResolvedScenario rs = Resolve(imported.scenario);
        ScanOptions options;
        options.dt = dt;
        const std::vector<Event> events = ScanScenario(rs, options);
        sv.verdict = CompareGroundTruth(events, labels);
      }
    } catch (const Error& e) {
      sv.failure = std::string(ErrorCodeName(e.code())) + ": " + e.what();
    }
    (sv.pass() ? report.passed : report.failed) += 1;
    report.scenarios.push_back(std::move(sv));
  }
  return report;
}

void PrintCiReport(const CiReport& report, std::ostream& out) {
  for (const ScenarioVerdict& sv : report.scenarios) {
    out << (sv.pass() ? "PASS " : "FAIL ") << sv.name;
    if (!sv.failure.empty()) {
      out << ": " << sv.failure << "\n";
      continue;
    }
    const Verdict& v = *sv.verdict;
    out << ": " << v.matched.size() << " matched, " << v.missed.size()
        << " missed, " << v.unexpected.size() << " unexpected\n";
    for (const auto& label : v.missed) {
      out << "  missed: " << DescribeLabel(label) << "\n";
    }
    for (const auto& event : v.unexpected) {
      out << "  unexpected: " << DescribeEvent(event) << "\n";
    }
  }
  out << "ci: " << report.scenarios.size() << " scenarios, " << report.passed
      << " passed, " << report.failed << " failed\n";
}

int RunCi(const std::string& scenario_dir, const std::string& labels_dir,
          std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(scenario_dir)) {
    err << scenario_dir << ": io-error: not a directory\n";
    return kExitIoError;
  }
  const CiReport report = RunCiChecks(scenario_dir, labels_dir);
  PrintCiReport(report, out);
  return report.exit_code();
}

int RunExport(const std::string& path, const ExportOptions& options,
              std::ostream& out, std::ostream& err) {
  const int selected = (options.grid ? 1 : 0) + (options.bounds_csv ? 1 : 0) +
                       (options.states ? 1 : 0);
  if (selected != 1) {
    err << "usage: export needs exactly one of --grid, --bounds-csv, "
           "--states\n";
    return kExitUsage;
  }
  if (options.states && (!options.t || !(*options.t >= 0.0))) {
    err << "usage: --states needs --t >= 0\n";
    return kExitUsage;
  }
  if (options.grid && !(*options.grid > 0.0)) {
    err << "usage: --grid resolution must be > 0\n";
    return kExitUsage;
  }
  try {
    std::string text;
    if (options.states) {
      const ResolvedScenario rs = LoadResolved(path, err);
      Json rows = Json::array();
      for (std::size_t i = 0; i < rs.trajectories.size(); ++i) {
        rows.push_back(
            VehicleStateToJson(rs.scenario.vehicles[i].spec.id,
                               StateAtTime(rs.trajectories[i], *options.t)));
      }
      text = rows.dump(2) + "\n";
    } else {
      const ImportResult imported = ImportScenario(ReadFile(path));
      const TrackBounds& track = imported.scenario.track;
      text = options.grid
                 ? FormatOccupancyGrid(MakeOccupancyGrid(track, *options.grid))
                 : ExportBoundsCsv(track);
    }
    return WriteOutput(text, options.output, out, err);
  } catch (const Error& e) {
    err << path << ": " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidInput ? kExitIoError : kExitFailure;
  }
}

int RunServe(const ServeOptions& options, std::ostream& out,
             std::ostream& err) {
  Scenario initial = service::EmptyScenario();
  if (!options.scenario.empty()) {
    try {
      ImportResult imported = ImportScenario(ReadFile(options.scenario));
      for (const auto& w : imported.warnings) err << "warning: " << w << "\n";
      initial = std::move(imported.scenario);
    } catch (const Error& e) {
      err << options.scenario << ": " << e.what() << "\n";
      return kExitIoError;
    }
  }
  service::Session session(std::move(initial));
  httplib::Server server;
  service::MountRoutes(server, session);
  if (!options.ui_dir.empty() && !server.set_mount_point("/", options.ui_dir)) {
    err << "warning: UI directory '" << options.ui_dir << "' not found\n";
  }
  if (!server.bind_to_port(options.host, options.port)) {
    err << "error: cannot bind " << options.host << ":" << options.port
        << " (port busy?)\n";
    return kExitIoError;
  }
  out << "serving on http://" << options.host << ":" << options.port << "\n"
      << std::flush;
  server.listen_after_bind();
  return kExitOk;
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{
      "Scenario authoring engine: validate, scan, replay and serve "
      "driving scenarios"};
  app.require_subcommand(1);

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Check scenario files");
  validate->add_option("paths", validate_paths, "Scenario files")->required();

  std::string scan_path;
  ScanOptions scan;
  double scan_accel = 0.0;
  auto* scan_cmd = app.add_subcommand("scan", "Run safety scans (JSON out)");
  scan_cmd->add_option("path", scan_path, "Scenario file")->required();
  scan_cmd->add_flag("--collision", scan.collision, "Footprint overlap scan");
  scan_cmd->add_flag("--offtrack", scan.offtrack, "Track-bound scan");
  auto* accel_opt =
      scan_cmd->add_option("--accel", scan_accel, "Combined accel limit")
          ->check(CLI::PositiveNumber);
  scan_cmd->add_option("--dt", scan.dt, "Scan time step (s)")
      ->check(CLI::PositiveNumber);

  const fs::path fixtures = FixtureDir();
  std::string ci_scenarios = (fixtures / "scenarios").string();
  std::string ci_labels = (fixtures / "labels").string();
  auto* ci = app.add_subcommand("ci", "Check scenarios against labels");
  ci->add_option("scenario_dir", ci_scenarios, "Directory of *.scn.json");
  ci->add_option("labels_dir", ci_labels, "Directory of <stem>.json labels");

  std::string export_path;
  ExportOptions exp;
  double export_grid = 0.0, export_t = 0.0;
  auto* export_cmd = app.add_subcommand("export", "Export derived artifacts");
  export_cmd->add_option("path", export_path, "Scenario file")->required();
  auto* grid_opt =
      export_cmd->add_option("--grid", export_grid, "Occupancy grid (m/cell)")
          ->check(CLI::PositiveNumber);
  export_cmd->add_flag("--bounds-csv", exp.bounds_csv, "Track bounds CSV");
  export_cmd->add_flag("--states", exp.states, "Vehicle states at --t");
  auto* t_opt = export_cmd->add_option("--t", export_t, "Query time (s)")
                    ->check(CLI::NonNegativeNumber);
  export_cmd->add_option("-o,--output", exp.output, "Output file");

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the local editing API");
  serve_cmd->add_option("scenario", serve.scenario, "Scenario to preload");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port")
      ->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--ui-dir", serve.ui_dir, "Static UI assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (validate->parsed()) return RunValidate(validate_paths, out, err);
  if (scan_cmd->parsed()) {
    if (accel_opt->count() > 0) scan.accel = scan_accel;
    return RunScan(scan_path, scan, out, err);
  }
  if (ci->parsed()) return RunCi(ci_scenarios, ci_labels, out, err);
  if (export_cmd->parsed()) {
    if (grid_opt->count() > 0) exp.grid = export_grid;
    if (t_opt->count() > 0) exp.t = export_t;
    return RunExport(export_path, exp, out, err);
  }
  if (serve_cmd->parsed()) return RunServe(serve, out, err);
  return kExitUsage;
}

}  // namespace scnforge::cli
