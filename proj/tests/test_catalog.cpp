#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "gqw/catalog.hpp"

using namespace gqw;

namespace {

std::vector<Rational> rationals(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (const char* x : xs) v.push_back(parse_rational(x));
  return v;
}

}  // namespace

TEST(Rank, FourVertexValueClasses) {
  const auto rep = rank_catalog(4, Phase::minus_one);
  EXPECT_EQ(rep.configurations, 38u * 12u);
  ASSERT_EQ(rep.value_classes.size(), 10u);
  const auto want = rationals({"5/12", "3/4", "1/2", "19/16", "5/4", "7/4", "3/4", "1", "5/4", "3/2"});
  const std::string labels = "RRRTTRRTTT";
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(rep.value_classes[i].name, "G" + std::to_string(i + 1));
    EXPECT_EQ(rep.value_classes[i].comfort, want[i]);
    EXPECT_EQ(rep.value_classes[i].scattering, labels[i]);
  }
  std::size_t covered = 0;
  for (const auto& c : rep.value_classes)
    for (auto r : c.rows) covered += rep.rows[r].labeled_count;
  EXPECT_EQ(covered, rep.configurations);
  EXPECT_EQ(rep.tie_groups, (std::vector<std::vector<std::string>>{{"G5", "G9"}, {"G2", "G7"}}));
}

TEST(Rank, FourVertexMaxima) {
  const auto minus = rank_catalog(4, Phase::minus_one);
  const auto plus = rank_catalog(4, Phase::plus_one);
  const auto want_minus = rationals({"5/4", "3/2", "5/4", "7/4", "3/4", "5/12"});
  const auto want_plus = rationals({"5/4", "3/2", "5/4", "17/12", "3/2", "13/8"});
  ASSERT_EQ(minus.maxima.size(), 6u);
  ASSERT_EQ(plus.maxima.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(minus.maxima[i].name, "Gamma" + std::to_string(i + 1));
    EXPECT_EQ(minus.maxima[i].comfort, want_minus[i]);
    EXPECT_EQ(plus.maxima[i].comfort, want_plus[i]);
  }
}

TEST(Rank, RowsDescendingAndRangeChecked) {
  const auto rep = rank_catalog(5, Phase::plus_one);
  EXPECT_EQ(rep.maxima.size(), 21u);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) EXPECT_GE(rep.rows[i - 1].comfort, rep.rows[i].comfort);
  EXPECT_THROW(rank_catalog(6, Phase::minus_one), InputError);
  EXPECT_THROW(rank_catalog(1, Phase::minus_one), InputError);
}

TEST(Analyze, K4ReportAgrees) {
  const auto rep = analyze(load_instance(GQW_DATA_DIR "/k4_standard.txt"));
  EXPECT_TRUE(rep.ok());
  ASSERT_EQ(rep.comfort_routes.size(), 3u);
  for (const auto& r : rep.comfort_routes) EXPECT_EQ(r.value, make_rational(5, 12)) << r.route;
  EXPECT_EQ(rep.scattering.classification, ScatteringClass::perfect_reflection);
}

TEST(Analyze, C4Transmits) {
  AnalyzeOptions opts;
  opts.simulate_steps = 500;
  const auto rep = analyze(load_instance(GQW_DATA_DIR "/c4_adjacent.txt"), opts);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.comfort_routes.front().value, make_rational(19, 16));
  EXPECT_EQ(rep.scattering.classification, ScatteringClass::bipartite_tau);
  ASSERT_TRUE(rep.simulation);
  EXPECT_LT(rep.simulation->distance_to_exact, 1e-9);
}

TEST(Analyze, MalformedFileIsInputError) {
  EXPECT_THROW(load_instance(GQW_DATA_DIR "/malformed.txt"), ParseError);
  EXPECT_THROW(load_instance(GQW_DATA_DIR "/missing.txt"), InputError);
}

TEST(Output, TextAndJsonCarryTheSameFractions) {
  for (const char* file : {"/k4_standard.txt", "/c4_adjacent.txt", "/k4_unsigned.txt", "/k3_fig1.txt"}) {
    const auto rep = analyze(load_instance(std::string(GQW_DATA_DIR) + file));
    const auto j = to_json(rep);
    std::ostringstream text;
    render_text(text, rep);
    // stationary-state lines: "  (o,t)  value  decimal"
    std::vector<Rational> from_text;
    const std::regex line(R"(^  \((\d+),(\d+)\)  (\S+))");
    std::istringstream in(text.str());
    for (std::string s; std::getline(in, s);) {
      std::smatch m;
      if (std::regex_search(s, m, line)) from_text.push_back(parse_rational(m[3].str()));
    }
    ASSERT_EQ(from_text.size(), j["psi"].size()) << file;
    for (std::size_t a = 0; a < from_text.size(); ++a) {
      EXPECT_EQ(parse_rational(j["psi"][a]["exact"].get<std::string>()), from_text[a]);
      EXPECT_EQ(from_text[a], rep.psi[a]);
    }
    for (const auto& r : j["comfortability"]["routes"])
      EXPECT_NE(text.str().find(r["exact"].get<std::string>()), std::string::npos);
  }
}

TEST(Output, RankJsonRoundTrip) {
  const auto rep = rank_catalog(4, Phase::minus_one);
  const auto j = nlohmann::json::parse(to_json(rep).dump());
  ASSERT_EQ(j["value_classes"].size(), rep.value_classes.size());
  for (std::size_t i = 0; i < rep.value_classes.size(); ++i)
    EXPECT_EQ(parse_rational(j["value_classes"][i]["exact"].get<std::string>()), rep.value_classes[i].comfort);
}
