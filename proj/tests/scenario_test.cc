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

#include "scnforge/scenario.h"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "scnforge/error.h"
#include "scnforge/scenario_json.h"

namespace scnforge {
namespace {

// 100 m straight strip, 10 m wide, one VUT on the centreline.
Scenario StraightScenario() {
  Scenario sc;
  sc.name = "straight";
  sc.track.left = {{0, 5}, {100, 5}};
  sc.track.right = {{0, -5}, {100, -5}};
  VehicleEntry vut;
  vut.spec.id = "vut";
  vut.spec.is_vut = true;
  vut.support = {{5, 0}, {30, 0}, {60, 0}, {95, 0}};
  vut.v_start = 10.0;
  sc.vehicles.push_back(vut);
  return sc;
}

bool HasCode(const std::vector<Finding>& findings, const std::string& code) {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.code == code; });
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInternal;
}

TEST(BoundsCsvTest, ImportsRectangleStrip) {
  const TrackBounds t = ImportBoundsCsv(
      "x_left;y_left;x_right;y_right\n0;5;0;-5\n100;5;100;-5\n");
  ASSERT_EQ(t.left.size(), 2u);
  ASSERT_EQ(t.right.size(), 2u);
  EXPECT_EQ(t.left[1], (Point2{100, 5}));
  EXPECT_EQ(t.right[0], (Point2{0, -5}));
}

TEST(BoundsCsvTest, UnevenBoundsBomAndCrlf) {
  const TrackBounds t = ImportBoundsCsv(
      "\xEF\xBB\xBFx_left;y_left;x_right;y_right\r\n"
      "0;5;0;-5\r\n50;5.5;100;-5\r\n100;5;;\r\n\r\n");
  EXPECT_EQ(t.left.size(), 3u);
  EXPECT_EQ(t.right.size(), 2u);
  EXPECT_EQ(t.left[1].y, 5.5);
}

TEST(BoundsCsvTest, CommaDecimalReportsLine) {
  try {
    ImportBoundsCsv("x_left;y_left;x_right;y_right\n0;5;0;-5\n1,5;5;100;-5\n");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
        << e.what();
  }
}

TEST(BoundsCsvTest, Rejections) {
  EXPECT_EQ(CodeOf([] { ImportBoundsCsv(""); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ImportBoundsCsv("x;y\n0;0;0;0\n"); }),
            ErrorCode::kParse);
  EXPECT_EQ(
      CodeOf([] { ImportBoundsCsv("x_left;y_left;x_right;y_right\n0;5;0\n"); }),
      ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] {
              ImportBoundsCsv("x_left;y_left;x_right;y_right\n0;5;0;-5\n");
            }),
            ErrorCode::kInvalidTrack);
  EXPECT_EQ(CodeOf([] {
              ImportBoundsCsv(
                  "x_left;y_left;x_right;y_right\n0;5;0;-5\n;;1;-5\n"
                  "2;5;2;-5\n");
            }),
            ErrorCode::kParse);
}

TEST(BoundsCsvTest, RoundTripIsBitExactAtStoredPrecision) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coord(-5000.0, 5000.0);
  TrackBounds t;
  for (int i = 0; i < 200; ++i) t.left.push_back({coord(rng), coord(rng)});
  for (int i = 0; i < 150; ++i) t.right.push_back({coord(rng), coord(rng)});
  const TrackBounds back = ImportBoundsCsv(ExportBoundsCsv(t));
  ASSERT_EQ(back.left.size(), t.left.size());
  ASSERT_EQ(back.right.size(), t.right.size());
  for (std::size_t i = 0; i < t.left.size(); ++i) {
    EXPECT_EQ(back.left[i].x, Quantize(t.left[i].x));
    EXPECT_EQ(back.left[i].y, Quantize(t.left[i].y));
  }
  for (std::size_t i = 0; i < t.right.size(); ++i) {
    EXPECT_EQ(back.right[i].x, Quantize(t.right[i].x));
    EXPECT_EQ(back.right[i].y, Quantize(t.right[i].y));
  }
  EXPECT_EQ(ExportBoundsCsv(back), ExportBoundsCsv(t));
}

TEST(QuantizeTest, NineDecimals) {
  EXPECT_EQ(Quantize(1.23456789012), 1.23456789);
  EXPECT_EQ(Quantize(-0.0000000004), 0.0);
  EXPECT_FALSE(std::signbit(Quantize(-0.0)));
  EXPECT_EQ(Quantize(Quantize(3.14159265358979)), Quantize(3.14159265358979));
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(2.0), "2");
}

TEST(ValidateScenarioTest, ValidScenarioHasNoFindings) {
  EXPECT_TRUE(ValidateScenario(StraightScenario()).empty());
}

TEST(ValidateScenarioTest, StructuralFindings) {
  Scenario sc = StraightScenario();
  sc.vehicles.push_back(sc.vehicles[0]);
  std::vector<Finding> f = ValidateScenario(sc);
  EXPECT_TRUE(HasCode(f, "duplicate-id"));
  EXPECT_TRUE(HasCode(f, "multiple-vut"));
  EXPECT_EQ(
      std::count_if(f.begin(), f.end(),
                    [](const Finding& x) { return x.code == "multiple-vut"; }),
      1);

  sc = StraightScenario();
  sc.vehicles[0].spec.is_vut = false;
  sc.vehicles[0].spec.width = 0.0;
  sc.vehicles[0].support.resize(2);
  f = ValidateScenario(sc);
  EXPECT_TRUE(HasCode(f, "no-vut"));
  EXPECT_TRUE(HasCode(f, "invalid-dimensions"));
  EXPECT_TRUE(HasCode(f, "support-too-short"));

  sc = StraightScenario();
  sc.vehicles.clear();
  sc.planning_horizon = 0.0;
  f = ValidateScenario(sc);
  EXPECT_TRUE(HasCode(f, "no-vehicles"));
  EXPECT_TRUE(HasCode(f, "invalid-horizon"));
  EXPECT_TRUE(HasErrors(f));
}

TEST(ValidateScenarioTest, CrossingBoundsAreInvalidTrack) {
  Scenario sc = StraightScenario();
  sc.track.left = {{0, 5}, {50, 5}, {60, -8}, {100, -8}};
  const std::vector<Finding> f = ValidateScenario(sc);
  EXPECT_TRUE(HasCode(f, "invalid-track"));
  EXPECT_THROW(CheckTrack(sc.track), Error);
  // Purity: same input, same findings.
  const std::vector<Finding> again = ValidateScenario(sc);
  ASSERT_EQ(again.size(), f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(again[i].code, f[i].code);
    EXPECT_EQ(again[i].message, f[i].message);
  }
}

TEST(SegmentsIntersectTest, Oracle) {
  EXPECT_TRUE(SegmentsIntersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  EXPECT_FALSE(SegmentsIntersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  EXPECT_TRUE(SegmentsIntersect({0, 0}, {2, 0}, {1, 0}, {1, 3}));  // touching
  EXPECT_FALSE(SegmentsIntersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
  EXPECT_TRUE(SegmentsIntersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));  // overlap
}

TEST(ResolveTest, ExportedTableMatchesPipeline) {
  const Scenario sc = StraightScenario();
  const Trajectory traj = ResolveVehicle(sc, sc.vehicles[0]);
  const Json doc = Json::parse(ExportScenario(sc));
  const Json& table = doc["vehicles"][0]["trajectory"];
  ASSERT_EQ(table["t"].size(), traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_EQ(table["t"][i].get<double>(), Quantize(traj.t[i]));
    EXPECT_EQ(table["x"][i].get<double>(), Quantize(traj.path.pts[i].x));
    EXPECT_EQ(table["v"][i].get<double>(), Quantize(traj.profile.v[i]));
    EXPECT_EQ(table["a_comb"][i].get<double>(), Quantize(traj.a_comb[i]));
  }
  EXPECT_EQ(traj.profile.v.front(), 10.0);
}

TEST(ResolveTest, DefaultsAndEdits) {
  Scenario sc = StraightScenario();
  sc.vehicles[0].v_start.reset();
  Trajectory traj = ResolveVehicle(sc, sc.vehicles[0]);
  EXPECT_EQ(traj.profile.v.front(), sc.friction.v_lim);  // cap on a straight
  sc.vehicles[0].profile_edits = {{40.0, 5.0}, {50.0, 5.0}};
  traj = ResolveVehicle(sc, sc.vehicles[0]);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.path.s[i] > 40.5 && traj.path.s[i] < 49.5) {
      EXPECT_EQ(traj.profile.v[i], 5.0) << "s=" << traj.path.s[i];
    }
  }
}

TEST(ResolveTest, EditsPastThePathEndFollowTheEnd) {
  Scenario sc = StraightScenario();
  sc.vehicles[0].profile_edits = {{80.0, 4.0}, {500.0, 0.0}};
  const Trajectory traj = ResolveVehicle(sc, sc.vehicles[0]);
  EXPECT_EQ(traj.profile.v.back(), 0.0);
  EXPECT_NEAR(traj.path.length(), 90.0, 1e-9);
}

TEST(ExportImportTest, RoundTripIsIdentityAndByteStable) {
  Scenario sc = StraightScenario();
  sc.raceline = {{0, 0}, {100, 0.123456789123}};
  sc.vehicles[0].support[1] = {30.1234567891234, 0.3333333333333};
  sc.vehicles[0].profile_edits = {{20.0, 12.5}, {25.0, 13.0}};
  VehicleEntry other;
  other.spec.id = "obj";
  other.spec.length = 4.1;
  other.spec.color = "#ff0000";
  other.support = {{10, 2}, {40, 2.5}, {70, 1}};
  other.v_end = 0.0;
  sc.vehicles.push_back(other);

  const std::string first = ExportScenario(sc);
  const ImportResult imported = ImportScenario(first);
  EXPECT_TRUE(imported.warnings.empty());
  EXPECT_EQ(imported.scenario, Quantized(sc));
  EXPECT_EQ(ExportScenario(imported.scenario), first);
}

TEST(ExportImportTest, RefusesInvalidScenarios) {
  Scenario sc = StraightScenario();
  sc.vehicles.clear();
  EXPECT_EQ(CodeOf([&] { ExportScenario(sc); }), ErrorCode::kExportRefused);
  sc = StraightScenario();
  sc.vehicles[0].support = {{5, 0}, {6, 0}};
  EXPECT_EQ(CodeOf([&] { ExportScenario(sc); }), ErrorCode::kExportRefused);
}

TEST(ExportImportTest, HandEditedVelocityIsStale) {
  Json doc = Json::parse(ExportScenario(StraightScenario()));
  doc["vehicles"][0]["trajectory"]["v"][7] = 99.0;
  const ImportResult r = ImportScenario(doc.dump());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("'vut'"), std::string::npos) << r.warnings[0];
}

TEST(ExportImportTest, SchemaErrors) {
  const std::string good = ExportScenario(StraightScenario());
  EXPECT_EQ(CodeOf([&] { ImportScenario(good.substr(0, good.size() / 2)); }),
            ErrorCode::kSchema);

  Json doc = Json::parse(good);
  doc["schema_version"] = "2";
  EXPECT_EQ(CodeOf([&] { ImportScenario(doc.dump()); }),
            ErrorCode::kUnsupportedVersion);

  doc = Json::parse(good);
  doc["vehicles"][0].erase("support");
  try {
    ImportScenario(doc.dump());
    FAIL() << "expected a schema error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
    EXPECT_NE(std::string(e.what()).find("vehicles[0].support"),
              std::string::npos)
        << e.what();
  }

  doc = Json::parse(good);
  doc["friction"]["a_max"] = "fast";
  EXPECT_EQ(CodeOf([&] { ImportScenario(doc.dump()); }), ErrorCode::kSchema);
}

TEST(ExportImportTest, TrajectoryIsOptionalOnImport) {
  Json doc = Json::parse(ExportScenario(StraightScenario()));
  doc["vehicles"][0].erase("trajectory");
  const ImportResult r = ImportScenario(doc.dump());
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.scenario.vehicles.size(), 1u);
}

}  // namespace
}  // namespace scnforge
