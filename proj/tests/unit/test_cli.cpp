#include "cli/commands.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("mshimura_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& cmd, const Json& config, const std::string& out = "out", unsigned threads = 1) {
    const fs::path cfg = dir_ / (out + ".json");
    std::ofstream(cfg) << config.dump();
    mshimura::cli::Options opts;
    opts.config = cfg.string();
    opts.out = (dir_ / out).string();
    opts.threads = threads;
    log_.str("");
    return mshimura::cli::run(cmd, opts, log_);
  }

  std::string text(const std::string& file, const std::string& out = "out") const {
    std::ifstream f(dir_ / out / file);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  Json json(const std::string& file, const std::string& out = "out") const { return Json::parse(text(file, out)); }

  fs::path dir_;
  std::ostringstream log_;
};

Json curve(const std::string& ambient, Json components) {
  return {{"ambient", ambient}, {"parameter", "complex"}, {"components", std::move(components)}};
}

}  // namespace

TEST_F(Cli, CountLineTorusGrowsLinearly) {
  ASSERT_EQ(run("count", {{"curve", curve("torus", {{0, 1}, {0, 2}})}, {"schedule", {4, 8, 16, 32}}}), 0);
  const Json g = json("growth.json");
  EXPECT_GE(g["fit"]["slope"].get<double>(), 0.8);
  const std::string csv = text("count.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "M,count,uncertain,volume,runtime_ms");
  const Json m = json("manifest.json");
  EXPECT_EQ(m["subcommand"], "count");
  EXPECT_EQ(m["modules"]["counting-lab"], "1.0.0");
  EXPECT_EQ(m["config_hash"].get<std::string>().rfind("fnv1a64:", 0), 0u);
}

TEST_F(Cli, CountParabolaAbelianGrowsQuadratically) {
  ASSERT_EQ(run("count", {{"curve", curve("abelian", {{0, 1}, {0, 0, 1}})}, {"schedule", {2, 4, 8, 16}}, {"volume", false}}), 0);
  const double slope = json("growth.json")["fit"]["slope"].get<double>();
  EXPECT_GE(slope, 1.6);
  EXPECT_LE(slope, 2.4);
}

TEST_F(Cli, CountIsDeterministic) {
  const Json cfg{{"curve", curve("abelian", {{0, 1}, {0, 0, 1}})}, {"schedule", {1, 2, 3}}};
  ASSERT_EQ(run("count", cfg, "a", 1), 0);
  ASSERT_EQ(run("count", cfg, "b", 3), 0);
  EXPECT_EQ(text("count.csv", "a"), text("count.csv", "b"));
  EXPECT_EQ(text("growth.json", "a"), text("growth.json", "b"));
  EXPECT_EQ(json("manifest.json", "a")["config_hash"], json("manifest.json", "b")["config_hash"]);
  EXPECT_TRUE(json("growth.json", "a")["fit"].is_null());
}

TEST_F(Cli, CountConfigErrors) {
  EXPECT_EQ(run("count", {{"curve", curve("torus", {{0, 1}})}, {"schedule", Json::array()}}), 1);
  EXPECT_NE(log_.str().find("$.schedule"), std::string::npos);
  EXPECT_EQ(run("count", {{"curve", curve("torus", {{0, 1}})}, {"schedule", {4, 2}}}), 1);
  EXPECT_EQ(run("count", {{"curve", curve("torus", {{0, 1}})}, {"schedule", {2}}, {"colour", 1}}), 1);
  EXPECT_NE(log_.str().find("$.colour"), std::string::npos);
  EXPECT_EQ(run("count", {{"curve", curve("fiber", {{0, 1}})}, {"schedule", {2}}}), 1);
  EXPECT_EQ(run("count", {{"curve", curve("torus", {{0, "x"}})}, {"schedule", {2}}}), 1);
  EXPECT_NE(log_.str().find("$.curve.components[0][1]"), std::string::npos);
}

TEST_F(Cli, CountLowConfidenceExitsTwo) {
  const Json cfg{{"curve", curve("torus", {{0, 1}, {0, 0, 1}})}, {"schedule", {16}}, {"low_confidence_ratio", 0.0}};
  EXPECT_EQ(run("count", cfg), 2);
  EXPECT_EQ(json("growth.json")["low_confidence"], Json({16}));
}

TEST_F(Cli, Volume) {
  ASSERT_EQ(run("volume", {{"curve", curve("torus", {{0, 1}, {0, 0, 1}})}, {"schedule", {4, 8, 16, 32}}}), 0);
  const double slope = json("growth.json")["fit"]["slope"].get<double>();
  EXPECT_GE(slope, 1.8);
  EXPECT_LE(slope, 2.2);
  EXPECT_EQ(run("volume", {{"curve", curve("torus", {{0, 1}})}, {"schedule", {2}}, {"tolerance", 2}}), 1);
}

TEST_F(Cli, Reduce) {
  const Json cfg = Json::parse(R"({"datum": {"g": 1}, "points": [
    {"u": [[0, 0]], "v": [0, 0], "tau": [5, 1]},
    {"u": [[0.5, 0.1]], "v": [1.5, 2.5], "tau": [0.1, 2]},
    {"u": [[0, 0]], "v": [0, 0], "tau": [0, 1e-300]}]})");
  ASSERT_EQ(run("reduce", cfg), 0);
  const Json r = json("reduce.json")["results"];
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0]["gamma"]["m"], Json::parse(R"([["1/1", "-5/1"], ["0/1", "1/1"]])"));
  EXPECT_TRUE(r[0]["in_fundamental_set"].get<bool>());
  EXPECT_LE(r[0]["residual"].get<double>(), 1e-9);
  EXPECT_EQ(r[1]["gamma"]["m"], Json::parse(R"([["1/1", "0/1"], ["0/1", "1/1"]])"));
  EXPECT_EQ(r[1]["gamma"]["v"], Json({"0/1", "0/1"}));
  EXPECT_TRUE(r[2].contains("error"));
  EXPECT_EQ(run("reduce", {{"datum", {{"g", 2}}}, {"points", Json::array()}}), 1);
}

TEST_F(Cli, Classify) {
  const Json base = Json::parse(R"({"datum": {"g": 1}, "w0": [[0, 1, 0]], "z_v": [0, 1]})");
  ASSERT_EQ(run("classify", base), 0);
  EXPECT_FALSE(json("classify.json")["weakly_special"].get<bool>());
  Json whole = base;
  whole["w0"] = Json::parse("[[1, 0, 0], [0, 1, 0], [0, 0, 1]]");
  ASSERT_EQ(run("classify", whole), 0);
  EXPECT_TRUE(json("classify.json")["weakly_special"].get<bool>());
  Json half = Json::parse(R"({"datum": {"g": 1}, "w0": [[0, 2, 0]], "z_v": [0, 1], "gamma_u": [[1]]})");
  ASSERT_EQ(run("classify", half), 0);
  EXPECT_TRUE(json("classify.json")["half_psi_integral"].get<bool>());
  half["w0"] = Json::parse("[[0, 1, 0]]");
  ASSERT_EQ(run("classify", half), 0);
  EXPECT_FALSE(json("classify.json")["half_psi_integral"].get<bool>());
  EXPECT_EQ(run("classify", Json::parse(R"({"datum": {"g": 1}, "w0": [[0, 1]], "z_v": [0, 1]})")), 1);
}

TEST_F(Cli, Subtorus) {
  const Json cfg{{"dimension", 2}, {"generators", {{2, 4}}}};
  ASSERT_EQ(run("subtorus", cfg), 0);
  EXPECT_EQ(json("subtorus.json")["subtorus"], Json({{1, 2}}));
  const Json h{{"dimension", 4},
               {"generators", {{1, 0, 0, 0}}},
               {"J", {{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}}},
               {"harvest", {{"curve", curve("abelian", {{0, 1}, {0, 2}})}, {"M", 3}}}};
  ASSERT_EQ(run("subtorus", h), 0);
  const Json out = json("subtorus.json");
  EXPECT_EQ(out["subabelian"], Json({{1, 0, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_EQ(out["stabilizer"], Json({{1, 0, 2, 0}, {0, 1, 0, 2}}));
}

TEST_F(Cli, Orbit) {
  const Json cfg{{"B", 0.5}, {"epsilon", 0.3}, {"n_max", 2000}, {"cross_check", {{{"v", {"1/6", 0}}}}}};
  ASSERT_EQ(run("orbit", cfg), 0);
  const Json s = json("orbit_summary.json");
  EXPECT_GT(s["C_epsilon"].get<double>(), 0);
  EXPECT_EQ(s["cross_check"][0]["ord"], "6");
  EXPECT_EQ(s["cross_check"][0]["closed_form"], "2/1");
  const std::string csv = text("orbit.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "N,omega,euler_product,ell,ratio");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2001);
  EXPECT_EQ(run("orbit", {{"B", 1.5}, {"epsilon", 0.3}}), 1);
  EXPECT_EQ(run("orbit", {{"B", 0.5}, {"epsilon", 0}}), 1);
}

TEST_F(Cli, IndexCheck) {
  ASSERT_EQ(run("index-check", {{"cases", {{{"p", 3}, {"n", 1}, {"m", 0}}, {{"p", 5}, {"n", 2}, {"m", 1}}}}}), 0);
  EXPECT_EQ(text("index.csv"), "p,n,m,bruteforce,formula,match\n3,1,0,2,2,1\n5,2,1,25,20,0\n");
  EXPECT_EQ(run("index-check", {{"cases", {{{"p", 6}, {"n", 1}, {"m", 0}}}}}), 1);
}

TEST_F(Cli, UnknownSubcommandAndMissingConfig) {
  EXPECT_EQ(run("plot", Json::object()), 1);
  mshimura::cli::Options opts;
  opts.config = (dir_ / "missing.json").string();
  opts.out = dir_.string();
  std::ostringstream log;
  EXPECT_EQ(mshimura::cli::run("orbit", opts, log), 1);
  EXPECT_NE(log.str().find("missing.json"), std::string::npos);
}
