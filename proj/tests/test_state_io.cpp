#include <gtest/gtest.h>

#include "fourbody/state_io.hpp"
#include "support.hpp"

using namespace fourbody;
using nlohmann::json;

namespace {

Masses const kUnequal(0.5, 1.0 / 3.0, 1.0 / 6.0);

}  // namespace

TEST(StateJson, RoundTripIsExact) {
  Rng rng(139);
  for (int n = 0; n < 50; ++n) {
    State const s = fourbody::testing::random_state(rng, kUnequal);
    json const doc = json::parse(state_to_json(s).dump());
    ReadState const r = state_from_json(doc, false);
    EXPECT_FALSE(r.recentered);
    EXPECT_EQ(r.state.masses(), s.masses());
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(r.state.position(i), s.position(i));
      EXPECT_EQ(r.state.velocity(i), s.velocity(i));
    }
  }
}

TEST(StateJson, Schema) {
  Rng rng(149);
  json const doc = state_to_json(fourbody::testing::random_state(rng, kUnequal));
  ASSERT_TRUE(doc.contains("masses"));
  EXPECT_EQ(doc["positions"].size(), 3u);
  EXPECT_EQ(doc["velocities"][2].size(), 4u);

  json extra = doc;
  extra["comment"] = "ignored";
  EXPECT_NO_THROW(state_from_json(extra, false));

  for (char const* key : {"masses", "positions", "velocities"}) {
    json broken = doc;
    broken.erase(key);
    EXPECT_THROW(state_from_json(broken, true), std::invalid_argument) << key;
  }
  json short_vec = doc;
  short_vec["positions"][0] = {1, 2, 3};
  EXPECT_THROW(state_from_json(short_vec, true), std::invalid_argument);
  json text = doc;
  text["velocities"][1][2] = "x";
  EXPECT_THROW(state_from_json(text, true), std::invalid_argument);
  json bad_mass = doc;
  bad_mass["masses"][0] = -1.0;
  EXPECT_THROW(state_from_json(bad_mass, true), std::invalid_argument);
  EXPECT_THROW(state_from_json(json::array(), true), std::invalid_argument);
}

TEST(StateJson, OffCenterNeedsPermission) {
  json doc;
  doc["masses"] = {1, 1, 1};
  doc["positions"] = {{1, 0, 0, 0}, {-1, 0, 0, 0}, {0, 0, 3, 0}};
  doc["velocities"] = {{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  EXPECT_THROW(state_from_json(doc, false), InvalidState);
  ReadState const r = state_from_json(doc, true);
  EXPECT_TRUE(r.recentered);
  EXPECT_NEAR(r.state.position(2)[2], 2.0, 1e-15);
  EXPECT_NEAR(r.state.velocity(0)[1], 2.0 / 3.0, 1e-15);
}
