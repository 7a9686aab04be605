#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "esav/config.hpp"

using namespace esav;

namespace {

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<no ConfigError>";
}

}  // namespace

TEST(Config, ExamplePresetDefaults) {
  const RunConfig c = parse_config_text("example = \"example1\"\n");
  EXPECT_EQ(c.example, "example1");
  EXPECT_EQ(c.model.kind, ModelKind::AllenCahn);
  EXPECT_EQ(c.model.epsilon, 0.1);
  EXPECT_EQ(c.model.mobility, 1.0);
  EXPECT_EQ(c.grid.nx, 128);
  EXPECT_EQ(c.grid.ny, 128);
  EXPECT_EQ(c.t_final, 0.032);
  EXPECT_EQ(c.ladder.size(), 5u);
}

TEST(Config, OverrideBeatsFile) {
  const std::string text = "[run]\nexample = example1\ndt = 1.6e-4\n";
  EXPECT_EQ(parse_config_text(text, {{"dt", "1e-5"}}).dt, 1e-5);
  EXPECT_EQ(parse_config_text(text, {{"run.dt", "2e-5"}}).dt, 2e-5);
  // the example named on the command line is applied before the file's keys
  const RunConfig c = parse_config_text("[run]\ndt = 1e-3\n", {{"example", "example6"}});
  EXPECT_EQ(c.scheme, SchemeId::Mesav1);
  EXPECT_EQ(c.dt, 1e-3);
}

TEST(Config, UnknownKeyIsNamed) {
  const std::string msg = message_of([] { parse_config_text("[model]\nepsilonn = 0.1\n"); });
  EXPECT_NE(msg.find("epsilonn"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":2"), std::string::npos) << msg;
  EXPECT_NE(message_of([] { parse_config_text("", {{"epsilonn", "1"}}); }).find("epsilonn"), std::string::npos);
}

TEST(Config, ParseErrorsCarryLineNumbers) {
  EXPECT_NE(message_of([] { parse_config_text("# c\n\n[run\n", {}, "f.ini"); }).find("f.ini:3"), std::string::npos);
  EXPECT_NE(message_of([] { parse_config_text("[run]\njust words\n", {}, "f.ini"); }).find("f.ini:2"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse_config_text("[nope]\n", {}, "f.ini"); }).find("f.ini:1"), std::string::npos);
}

TEST(Config, ValidationNamesField) {
  const std::string msg = message_of([] { parse_config_text("example = example1\n[run]\ndt = -1\n"); });
  EXPECT_NE(msg.find("dt"), std::string::npos) << msg;
  EXPECT_NE(message_of([] { parse_config_text("[grid]\nnx = 7\n"); }).find("grid"), std::string::npos);
  EXPECT_NE(message_of([] { parse_config_text("[run]\ndt = fast\n"); }).find("dt"), std::string::npos);
  EXPECT_NE(message_of([] { parse_config_text("[run]\nscheme = esav9\n"); }).find("scheme"), std::string::npos);
}

TEST(Config, SectionsDisambiguate) {
  EXPECT_NE(message_of([] { parse_config_text("", {{"epsilon", "0.2"}}); }).find("ambiguous"), std::string::npos);
  const RunConfig c = parse_config_text("[model]\nepsilon = 0.2\n[surfactant]\nepsilon = 0.03\n");
  EXPECT_EQ(c.model.epsilon, 0.2);
  EXPECT_EQ(c.surfactant.epsilon, 0.03);
}

TEST(Config, ValueSyntax) {
  const RunConfig c = parse_config_text(
      "; comment\n[grid]\nnx = 64   # trailing\nny = 32\nlx = 2pi\nly = 0.5*pi\n[run]\nsnapshot_times = 0, 0.01, "
      "0.032\nseed = 18446744073709551615\nchecks = false\nesav_c = 1234.5\n");
  EXPECT_EQ(c.grid.nx, 64);
  EXPECT_EQ(c.grid.ny, 32);
  EXPECT_DOUBLE_EQ(c.grid.lx, 2 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(c.grid.ly, 0.5 * std::numbers::pi);
  EXPECT_EQ(c.snapshot_times.size(), 3u);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_FALSE(c.checks);
  ASSERT_TRUE(c.esav_c.has_value());
  EXPECT_EQ(*c.esav_c, 1234.5);
  EXPECT_FALSE(parse_config_text("[run]\nesav_c = auto\n").esav_c.has_value());
}

TEST(Config, RoundTripThroughIni) {
  for (const auto& id : example_ids()) {
    RunConfig c = example_config(id);
    c.dt = c.dt / 3 * 3;
    c.seed = 987654321;
    const std::string ini = to_ini(c);
    const RunConfig back = parse_config_text(ini);
    EXPECT_EQ(to_ini(back), ini) << id;
    EXPECT_EQ(back.dt, c.dt);
    EXPECT_EQ(back.grid, c.grid);
    EXPECT_EQ(back.model.kind, c.model.kind);
    EXPECT_EQ(back.ladder, c.ladder);
  }
}

TEST(Config, KeysAreCanonical) {
  const auto& keys = config_keys();
  for (const char* k : {"run.dt", "grid.nx", "model.epsilon", "surfactant.theta", "study.ladder", "run.esav_c"})
    EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
}

TEST(Config, Files) {
  const auto dir = std::filesystem::temp_directory_path() / "esav_config";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "ex.ini").string();
  std::ofstream(path) << "example = example3\n[run]\nt_final = 1\n";
  const RunConfig c = parse_config(path, {{"seed", "5"}});
  EXPECT_EQ(c.model.kind, ModelKind::CahnHilliard);
  EXPECT_EQ(c.t_final, 1.0);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_THROW(parse_config((dir / "missing.ini").string()), ConfigError);
}

TEST(Config, Overrides) {
  EXPECT_EQ(parse_override("a.b=c=d"), Override("a.b", "c=d"));
  EXPECT_THROW(parse_override("dt"), ConfigError);
}
