#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cp1/config.hpp"
#include "cp1/error.hpp"
#include "cp1/scene.hpp"
#include "support.hpp"

using namespace cp1;

namespace {

std::string parse_error(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    return e.detail();
  }
  ADD_FAILURE() << "parsed: " << text;
  return {};
}

}  // namespace

TEST(Scene, ParsesFixture) {
  Scene s = read_scene_file(cp1::test::data_path("two_region.scene"));
  EXPECT_EQ(s.genus, 2);
  ASSERT_EQ(s.curves.size(), 2u);
  EXPECT_EQ(s.curves[1].word, "a2");
  EXPECT_EQ(s.curves[1].weight, 2);
  EXPECT_EQ(s.points.size(), 5u);
}

TEST(Scene, OverridesAndConfig) {
  Scene s = parse_scene("cp1-scene v1\ngenus 3\noverride 2 0.05 -1\nconfig epsilon_cap 0.02\nconfig verify false\n");
  EXPECT_EQ(s.genus, 3);
  ASSERT_EQ(s.overrides.count(2), 1u);
  EXPECT_DOUBLE_EQ(*s.overrides[2].shift, 0.05);
  EXPECT_EQ(*s.overrides[2].drift, -1);
  LoadedScene ls = load_scene(s);
  EXPECT_DOUBLE_EQ(ls.config.epsilon_cap, 0.02);
  EXPECT_FALSE(ls.config.verify);
  EXPECT_FALSE(ls.has_arc());
}

TEST(Scene, FormatRoundTrip) {
  Scene s = read_scene_file(cp1::test::data_path("interleaved.scene"));
  Scene t = parse_scene(format_scene(s));
  EXPECT_EQ(format_scene(t), format_scene(s));
  ASSERT_EQ(t.points.size(), s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) EXPECT_EQ(t.points[i], s.points[i]);
  EXPECT_EQ(t.overrides.size(), 2u);
}

TEST(Scene, ErrorsCarryLineAndColumn) {
  EXPECT_EQ(parse_error("genus 2\n").substr(0, 4), "1:1:");
  EXPECT_EQ(parse_error("cp1-scene v1\ngenus 1\n").substr(0, 4), "2:7:");
  EXPECT_EQ(parse_error("cp1-scene v1\ngenus 2\ncurve a1 one\n").substr(0, 5), "3:10:");
  EXPECT_EQ(parse_error("cp1-scene v1\ngenus 2\npoint 0 -1\n").substr(0, 4), "3:9:");
  EXPECT_EQ(parse_error("cp1-scene v1\ngenus 2\npoint 0 1\n").substr(0, 2), "4:");
  EXPECT_EQ(parse_error("cp1-scene v1\ngenus 2\nwhat 3\n").substr(0, 4), "3:1:");
  EXPECT_EQ(parse_error("cp1-scene v1\ngenus 2\nconfig nope 1\n").substr(0, 4), "3:8:");
  EXPECT_EQ(parse_error("cp1-scene v1\n").substr(0, 2), "2:");
}

TEST(Scene, CommentsAndBlankLines) {
  Scene s = parse_scene("# header follows\ncp1-scene v1\n\ngenus 2  # two handles\ncurve b1 1\n");
  EXPECT_EQ(s.curves.size(), 1u);
}

TEST(Scene, FileErrorsNamePath) {
  try {
    read_scene_file(cp1::test::data_path("malformed.scene"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("malformed.scene:3:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(read_scene_file("/nonexistent/x.scene"), Error);
}

TEST(Config, FileAndEnvironment) {
  auto path = std::filesystem::temp_directory_path() / "cp1_test_config.txt";
  {
    std::ofstream out(path);
    out << "# test\nepsilon_cap 0.01\nverify off\n";
  }
  Config c;
  load_config_file(c, path.string());
  EXPECT_DOUBLE_EQ(c.epsilon_cap, 0.01);
  EXPECT_FALSE(c.verify);
  ::setenv("CP1_CONFIG", path.c_str(), 1);
  Config e = config_from_environment();
  ::unsetenv("CP1_CONFIG");
  EXPECT_DOUBLE_EQ(e.epsilon_cap, 0.01);
  EXPECT_THROW(apply_config_setting(c, "epsilon_cap", "x"), Error);
  std::filesystem::remove(path);
}
