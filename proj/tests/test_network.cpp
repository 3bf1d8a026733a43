#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "losr/network.hpp"

using namespace losr;

namespace {

std::vector<PartySpec> triangle_specs() {
  return {{"A", 2, 2}, {"B", 3, 2}, {"C", 2, 2}};
}

// the hexagon: every source twisted an odd number of times in total
Inflation hexagon(const Scenario& tri) {
  // source 0 (attaches B,C) twisted; sources 1,2 straight
  std::vector<std::vector<std::vector<int>>> w = {
      {{0, 1}, {1, 0}}, {{0, 0}, {1, 1}}, {{0, 0}, {1, 1}}};
  return Inflation(&tri, 2, w);
}

}  // namespace

TEST_CASE("canonical scenario attachment") {
  auto tri = canonical_scenario(3, triangle_specs());
  CHECK(tri.n() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK_FALSE(tri.source_attaches(i, i));
    CHECK(tri.parties_of_source(i).size() == 2);
  }

  std::vector<PartySpec> four;
  for (char c : {'A', 'B', 'C', 'D'}) four.push_back({std::string(1, c), 2, 2});
  auto tetra = canonical_scenario(4, four);
  for (int i = 0; i < 4; ++i) CHECK(tetra.parties_of_source(i).size() == 3);

  auto pair = canonical_scenario(2, {{"A", 1, 2}, {"B", 1, 2}});
  // degenerate N=2: each source attaches exactly one party
  CHECK(pair.parties_of_source(0).size() == 1);

  CHECK_THROWS(canonical_scenario(1, {{"A", 1, 2}}));
  CHECK_THROWS(canonical_scenario(2, {{"A", 1, 2}, {"A", 1, 2}}));
}

TEST_CASE("validate_inflation nonfanout rules") {
  auto tri = canonical_scenario(3, triangle_specs());
  CHECK(validate_inflation(identity_inflation(tri, 1)));
  CHECK(validate_inflation(identity_inflation(tri, 2)));  // double triangle
  CHECK(validate_inflation(hexagon(tri)));

  // both copies of source C feed A^1: party-side permutation rule broken
  std::vector<std::vector<std::vector<int>>> bad = {
      {{0, 0}, {1, 1}}, {{0, 0}, {1, 1}}, {{0, 0}, {0, 1}}};
  CHECK_FALSE(validate_inflation(Inflation(&tri, 2, bad)));
}

TEST_CASE("inflation copy counts") {
  auto tri = canonical_scenario(3, triangle_specs());
  for (const auto& infl : {identity_inflation(tri, 2), hexagon(tri)}) {
    for (PartyCopy p : infl.all_parties())
      CHECK(infl.sources_of_party(p).size() == 2);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 2; ++k)
        CHECK(infl.parties_of_source({i, k}).size() == 2);
  }
}

TEST_CASE("subnetwork isomorphism hexagon vs triangle") {
  auto tri = canonical_scenario(3, triangle_specs());
  auto hex = hexagon(tri);

  // adjacent (A,B) pair of the hexagon matches the base (A,B) sub-network
  bool found_pair = false;
  for (int ka = 0; ka < 2; ++ka) {
    for (int kb = 0; kb < 2; ++kb) {
      auto g1 = SubNetwork::of_inflation(hex, {{0, ka}, {1, kb}});
      auto g2 = SubNetwork::of_scenario(tri, {0, 1});
      if (subnetwork_isomorphism(g1, g2)) found_pair = true;
    }
  }
  CHECK(found_pair);

  // no hexagon triple matches the base triangle (4 source copies vs 3)
  for (int ka = 0; ka < 2; ++ka)
    for (int kb = 0; kb < 2; ++kb)
      for (int kc = 0; kc < 2; ++kc) {
        auto g1 = SubNetwork::of_inflation(hex, {{0, ka}, {1, kb}, {2, kc}});
        auto g2 = SubNetwork::of_scenario(tri, {0, 1, 2});
        CHECK_FALSE(subnetwork_isomorphism(g1, g2).has_value());
      }

  // double triangle triple does match
  auto dt = identity_inflation(tri, 2);
  auto g1 = SubNetwork::of_inflation(dt, {{0, 0}, {1, 0}, {2, 0}});
  auto g2 = SubNetwork::of_scenario(tri, {0, 1, 2});
  CHECK(subnetwork_isomorphism(g1, g2).has_value());
}

TEST_CASE("subnetwork isomorphism is reflexive and symmetric") {
  auto tri = canonical_scenario(3, triangle_specs());
  auto hex = hexagon(tri);
  std::vector<SubNetwork> subs;
  subs.push_back(SubNetwork::of_inflation(hex, {{0, 0}, {1, 0}}));
  subs.push_back(SubNetwork::of_inflation(hex, {{0, 1}, {1, 1}}));
  subs.push_back(SubNetwork::of_inflation(hex, {{0, 0}, {1, 1}}));
  for (const auto& g : subs) CHECK(subnetwork_isomorphism(g, g).has_value());
  for (const auto& g1 : subs)
    for (const auto& g2 : subs)
      CHECK(subnetwork_isomorphism(g1, g2).has_value() ==
            subnetwork_isomorphism(g2, g1).has_value());
}
