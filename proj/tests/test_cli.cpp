#include <gtest/gtest.h>

#include "cli_runner.hpp"
#include "helios/fixtures.hpp"
#include "helios/report_io.hpp"
#include "test_util.hpp"

namespace {

using clirun::quoted;
using helios::Json;
namespace fx = helios::fixtures;

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testutil::temp_dir("cli"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return quoted((dir_ / name).string()); }
  std::filesystem::path dir_;
};

TEST_F(CliTest, ValidateHouseSummary) {
  const auto scene = fx::write(fx::house_tree_streetlight(), dir_);
  const auto r = clirun::run("validate " + quoted(scene.string()));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(contains(r.output, "objects: 3, triangles: " + std::to_string(fx::kHouseTriangles) + ", generators: 1, samples: 1404"))
      << r.output;
}

TEST_F(CliTest, UsageErrorsExit2) {
  EXPECT_EQ(clirun::run("").code, 2);
  EXPECT_EQ(clirun::run("frobnicate").code, 2);
  EXPECT_EQ(clirun::run("simulate --from 2023-01-01T00:00:00Z").code, 2);
  EXPECT_EQ(clirun::run("--help").code, 0);
}

TEST_F(CliTest, MissingObjExit2NamesPath) {
  const auto scene = fx::write(fx::wall_bike(), dir_);
  std::filesystem::remove(dir_ / "bike.obj");
  const auto r = clirun::run("validate " + quoted(scene.string()));
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.output, "bike.obj")) << r.output;
}

TEST_F(CliTest, SubstringMissingCellExit2) {
  auto f = fx::wall_bike();
  auto& subs = f.scene["generators"][0]["substrings"];
  subs[0].erase(subs[0].size() - 1);
  const std::string gen = f.scene["generators"][0]["id"];
  const auto scene = fx::write(f, dir_);
  const auto r = clirun::run("validate " + quoted(scene.string()));
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.output, gen)) << r.output;
  EXPECT_TRUE(contains(r.output, "cell")) << r.output;
}

TEST_F(CliTest, NightShadowsExit3) {
  const auto scene = fx::write(fx::wall_bike(), dir_);
  const auto r = clirun::run("shadows --scene " + quoted(scene.string()) + " --at 2023-12-21T22:00:00Z --mask " + path("m.csv"));
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(contains(r.output, "sun below horizon")) << r.output;
}

TEST_F(CliTest, OutOfRangeYearExit3) {
  const auto scene = fx::write(fx::wall_bike(), dir_);
  const auto r = clirun::run("shadows --scene " + quoted(scene.string()) + " --at 2150-06-01T12:00:00Z --mask " + path("m.csv"));
  EXPECT_EQ(r.code, 3) << r.output;
}

TEST_F(CliTest, ShadowsWritesMaskAndDepth) {
  const auto scene = fx::write(fx::wall_bike(), dir_);
  const auto r = clirun::run("shadows --scene " + quoted(scene.string()) + " --at " + fx::kWallBikeInstant + " --mask " +
                             path("m.csv") + " --depth " + path("d.pgm"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(contains(r.output, "samples shaded"));
  const std::string mask = helios::read_text_file(dir_ / "m.csv");
  EXPECT_EQ(std::count(mask.begin(), mask.end(), '\n'), 3888 + 1);
  EXPECT_EQ(helios::read_text_file(dir_ / "d.pgm").substr(0, 2), "P5");
}

TEST_F(CliTest, NoOccludersNoLoss) {
  const Json doc = testutil::scene_doc(Json::array(), Json::array({testutil::flat_generator()}));
  helios::write_file(dir_ / "empty.json", doc.dump());
  const auto r = clirun::run("simulate --scene " + path("empty.json") +
                             " --clear-sky --from 2023-06-01T00:00:00Z --to 2023-06-03T00:00:00Z --report " + path("r.csv") +
                             " --heatmap " + path("h.csv"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(contains(r.output, "loss fraction: 0.0000")) << r.output;
  EXPECT_TRUE(contains(r.output, "instants: "));
  EXPECT_TRUE(contains(r.output, "wall-clock: "));
}

TEST_F(CliTest, OutputsAreByteReproducible) {
  const auto scene = fx::write(fx::wall_bike(), dir_);
  std::string reports[2], heatmaps[2];
  const char* threads[2] = {"1", "3"};
  for (int k = 0; k < 2; ++k) {
    const std::string rp = "r" + std::to_string(k) + ".csv", hp = "h" + std::to_string(k) + ".csv";
    const auto r = clirun::run("simulate --scene " + quoted(scene.string()) +
                               " --clear-sky --from 2023-03-20T00:00:00Z --to 2023-03-22T00:00:00Z --step 10m --threads " +
                               threads[k] + " --report " + path(rp) + " --heatmap " + path(hp));
    ASSERT_EQ(r.code, 0) << r.output;
    reports[k] = helios::read_text_file(dir_ / rp);
    heatmaps[k] = helios::read_text_file(dir_ / hp);
  }
  EXPECT_EQ(reports[0], reports[1]);
  EXPECT_EQ(heatmaps[0], heatmaps[1]);
  EXPECT_FALSE(reports[0].empty());
}

TEST_F(CliTest, ConfigFileSuppliesOptions) {
  const auto scene = fx::write(fx::wall_bike(), dir_);
  helios::write_file(dir_ / "run.toml", "[simulate]\nfrom = \"2023-06-01T00:00:00Z\"\nto = \"2023-06-01T12:00:00Z\"\nstep = \"1h\"\n");
  const auto r = clirun::run("--config " + path("run.toml") + " simulate --scene " + quoted(scene.string()) + " --clear-sky --report " +
                             path("r.csv") + " --heatmap " + path("h.csv"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(contains(r.output, "instants: "));
}

TEST_F(CliTest, MeasuredWeatherNeedsFile) {
  const auto scene = fx::write(fx::wall_bike(), dir_);
  const auto r = clirun::run("simulate --scene " + quoted(scene.string()) +
                             " --weather-mode measured --from 2023-06-01T00:00:00Z --to 2023-06-02T00:00:00Z");
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.output, "--weather")) << r.output;
}

}  // namespace
