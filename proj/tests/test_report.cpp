#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "torsionlab/report.hpp"

using namespace torsionlab;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto dir = std::filesystem::temp_directory_path() / "torsionlab_report_test";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << content;
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-12), "1e-12");
  EXPECT_EQ(std::stod(format_number(pi)), pi);
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(DomainJson, RoundTrip) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.2}, 32);
  auto back = domain_from_json(domain_to_json(d));
  EXPECT_EQ(back.hole_count(), 1u);
  EXPECT_DOUBLE_EQ(back.area(), d.area());
  EXPECT_EQ(domain_to_json(back).dump(), domain_to_json(d).dump());
}

TEST(DomainJson, SchemaViolations) {
  EXPECT_EQ(code_of([] { domain_from_json(Json::parse(R"({"holes": []})")); }), ErrorCode::schema_violation);
  EXPECT_EQ(code_of([] { domain_from_json(Json::parse(R"({"outer": [[0,0],[1,0],[1,1]], "extra": 1})")); }),
            ErrorCode::schema_violation);
  EXPECT_EQ(code_of([] { domain_from_json(Json::parse(R"({"outer": [[0,0],[1,0],[1]]})")); }),
            ErrorCode::schema_violation);
  EXPECT_EQ(code_of([] { domain_from_json(Json::parse(R"({"outer": [[0,0],[1,0],[1,"a"]]})")); }),
            ErrorCode::schema_violation);
  EXPECT_EQ(code_of([] { domain_from_json(Json::parse("[1, 2]")); }), ErrorCode::schema_violation);
  // geometry errors keep their own code
  EXPECT_EQ(code_of([] { domain_from_json(Json::parse(R"({"outer": [[0,0],[2,0],[0,1],[1,1]]})")); }),
            ErrorCode::self_intersecting);
}

TEST(DomainJson, LoadFile) {
  auto good = temp_file("good.json", R"({"outer": [[0,0],[2,0],[2,2],[0,2]], "holes": [[[0.5,0.5],[1.5,0.5],[1.5,1.5],[0.5,1.5]]]})");
  auto d = load_domain(good.string());
  EXPECT_DOUBLE_EQ(d.area(), 3.0);
  auto bad = temp_file("bad.json", R"({"outer": [[0,0],)");
  EXPECT_EQ(code_of([&] { load_domain(bad.string()); }), ErrorCode::schema_violation);
  EXPECT_EQ(code_of([] { load_domain("/nonexistent/domain.json"); }), ErrorCode::schema_violation);
}

TEST(DomainJson, SampleFiles) {
  auto a = load_domain(std::string(TORSIONLAB_SAMPLES) + "/annulus.json");
  EXPECT_NEAR(a.holes_area() / a.outer_area(), 0.25, 1e-3);
  auto b = load_domain(std::string(TORSIONLAB_SAMPLES) + "/offset_annulus.json");
  EXPECT_NEAR(b.holes_centroid().x, 0.2, 1e-12);
}

TEST(Csv, Quoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_row({"x", "y,z", ""}), "x,\"y,z\",\r\n");
}

TEST(Csv, SweepRowsAlignWithHeader) {
  auto header = sweep_header();
  EXPECT_EQ(header.front(), "index");
  EXPECT_EQ(header.back(), "error");
  auto failed = sweep_row(3, 0.2, nullptr, "FeatureTooSmall: too close");
  EXPECT_EQ(failed.size(), header.size());
  EXPECT_EQ(failed[header.size() - 2], "failed");

  DeficitReport r;
  r.G = 1;
  evaluate_bounds(r);
  auto ok = sweep_row(0, 0.0, &r, "");
  EXPECT_EQ(ok.size(), header.size());
  EXPECT_EQ(ok[header.size() - 2], "ok");
}

TEST(ReportJson, StableLayout) {
  DeficitReport r;
  r.G = pi;
  r.S = pi / 4;
  r.holes = 1;
  r.T_opt = annulus_torsion_exact(r.G, r.S);
  r.T = r.T_opt - 1e-3;
  evaluate_bounds(r);
  auto j = to_json(r);
  EXPECT_EQ(j.begin().key(), "G");
  EXPECT_NEAR(j["epsilon"].get<double>(), 1e-3, 1e-15);
  EXPECT_EQ(j["records"].size(), r.records.size());
  EXPECT_TRUE(j["hard_bounds_hold"].get<bool>());
  EXPECT_EQ(j.dump(), to_json(r).dump());
}

TEST(ReportJson, TrendWithoutFit) {
  BetaTrend t;
  t.members = 3;
  auto j = to_json(t);
  EXPECT_TRUE(j["slope"].is_null());
}

TEST(Svg, FieldAndTrendAreWellFormed) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.2}, 64);
  auto run = solve_torsion(d, 0.07);
  auto svg = field_svg(d, extended_field(run.solution, run.mesh, d), 6);
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<polygon"), std::string::npos);  // outlines
  EXPECT_NE(svg.find("<line"), std::string::npos);     // iso-lines

  auto t = trend_svg({{0.3, 0.05, 0.6}, {0.1, 0.005, 0.2}, {0.2, 0.02, 0.4}});
  EXPECT_NE(t.find("</svg>"), std::string::npos);
  EXPECT_NE(t.find("<circle"), std::string::npos);
}
