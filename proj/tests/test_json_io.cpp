#include <gtest/gtest.h>

#include <fstream>

#include "committee.hpp"
#include "lgdda/json_io.hpp"
#include "lgdda/oracle.hpp"
#include "lgdda/transforms.hpp"

using namespace lgdda;
using nlohmann::json;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(LGDDA_DATA_DIR) + "/" + name);
  return json::parse(in);
}

}  // namespace

TEST(JsonIo, Grades) {
  EXPECT_EQ(io::grade_to_json(Grade::omega()), json("w"));
  EXPECT_EQ(io::grade_to_json(3), json(3));
  EXPECT_EQ(io::grade_from_json(json("w"), "x"), Grade::omega());
  EXPECT_EQ(io::grade_from_json(json(4), "x"), Grade(4));
  EXPECT_THROW(io::grade_from_json(json(-1), "x"), Error);
  EXPECT_THROW(io::grade_from_json(json("7"), "x"), Error);
}

TEST(JsonIo, CommitteeFileMatchesFixture) {
  Magbm m = io::magbm_from_json(load("committee.json"));
  Magbm expected = committee::model({});
  EXPECT_EQ(m.agents, expected.agents);
  EXPECT_EQ(m.designated, expected.designated);
  EXPECT_EQ(m.context, expected.context);
}

TEST(JsonIo, MagbmRoundTrip) {
  Magbm m = committee::model({1, 2, 1, 1, 2});
  Magbm back = io::magbm_from_json(io::to_json(m));
  EXPECT_EQ(back.designated, m.designated);
  EXPECT_EQ(back.context, m.context);
}

TEST(JsonIo, DoxModelRoundTrip) {
  Magbm b = committee::model({});
  DoxModel m = magbm_to_qngdm(b);
  DoxModel back = io::dox_model_from_json(io::to_json(m));
  EXPECT_EQ(back.worlds, m.worlds);
  EXPECT_EQ(back.designated, m.designated);
  EXPECT_EQ(back.valuation, m.valuation);
  ASSERT_TRUE(back.rho);
  EXPECT_EQ(*back.rho, *m.rho);
  for (std::size_t w = 0; w < m.world_count(); ++w)
    for (const auto& a : m.agents) EXPECT_EQ(back.belief(a, w), m.belief(a, w));
}

TEST(JsonIo, OmittedTableMeansDerived) {
  json j = {{"agents", {"1"}}, {"worlds", {"w"}}, {"designated", "w"}};
  DoxModel m = io::dox_model_from_json(j);
  EXPECT_FALSE(m.rho);
  EXPECT_FALSE(io::to_json(m).contains("rho"));
}

TEST(JsonIo, OmittedEntriesAreOmega) {
  DoxModel m = io::dox_model_from_json(load("bad_qngdm.json"));
  EXPECT_EQ(m.rho->get(Group{"1"}, 0, 0), Grade::omega());
  EXPECT_EQ(m.rho->get(Group{"1", "2"}, 0, 1), Grade(1));
  EXPECT_FALSE(validate_qngdm(m).ok());
}

TEST(JsonIo, ErrorsNameTheirLocation) {
  json bad = load("committee.json");
  bad["designated"]["bases"]["Ann"][1][0] = "id &";
  try {
    io::magbm_from_json(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("designated.bases.Ann[1]"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("position"), std::string::npos) << e.what();
  }
  bad = load("committee.json");
  bad["designated"]["bases"]["Zed"] = json::array();
  EXPECT_THROW(io::magbm_from_json(bad), Error);
  json dox = load("two_worlds.json");
  dox["designated"] = "nowhere";
  EXPECT_THROW(io::dox_model_from_json(dox), Error);
  dox = load("two_worlds.json");
  dox["dox"]["1"]["w"][0][0] = "D{1,0} p";
  EXPECT_THROW(io::dox_model_from_json(dox), Error);
}

TEST(JsonIo, VerdictShape) {
  Verdict v = decide_formula(parse("~D{1,1} p"), Mode::sat, true);
  json j = io::to_json(v);
  EXPECT_EQ(j["result"], "sat");
  EXPECT_TRUE(j["model"].is_object());
  EXPECT_TRUE(j["stats"].contains("max_depth"));
  EXPECT_EQ(io::to_json(decide_formula(parse("p"), Mode::valid, false))["model"], json(nullptr));
}

TEST(JsonIo, ValidationReportShape) {
  json j = io::to_json(validate_qngdm(io::dox_model_from_json(load("bad_qngdm.json"))));
  EXPECT_EQ(j["ok"], false);
  ASSERT_EQ(j["violations"].size(), 1u);
  EXPECT_EQ(j["violations"][0]["condition"], "partition_witness");
}

TEST(JsonIo, CrossCheckReportShape) {
  oracle::SearchBounds sb;
  sb.budget = 100000;
  json j = io::to_json(oracle::cross_check(5, {}, sb));
  EXPECT_EQ(j["total"], 5);
  EXPECT_EQ(j["cases"].size(), 5u);
}
