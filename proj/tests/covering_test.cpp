#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "plink/covering.hpp"

using namespace plink;

namespace {

const char* kChord = "boundary 2\nwall 0 head a\nwall 1 tail a\n";
const char* kTwoPassage =
    "boundary 4\nwall 1 head a\nwall 2 tail a\nwall 0 head b\nwall 3 tail b\n";
const char* kTrefoil =
    "boundary 0\ncross a 1 4 2 5\ncross b 3 6 4 1\ncross c 5 2 6 3\n";

}  // namespace

TEST_CASE("lift of a wall-free diagram is two disjoint copies") {
  auto cd = lift_to_sphere(parse_diagram(kTrefoil));
  CHECK(cd.diagram.boundary_count == 0);
  CHECK(cd.diagram.crossings.size() == 6);
  CHECK(validate(cd.diagram).ok);
  REQUIRE(cd.components.size() == 2);
  std::set<std::string> tags;
  for (const auto& [id, src] : cd.origin) {
    CHECK(src.first == "1");  // base component id
    tags.insert(src.second);
  }
  CHECK(tags == std::set<std::string>{"+", "-"});
}

TEST_CASE("lift of the chord is one circle") {
  auto cd = lift_to_sphere(parse_diagram(kChord));
  CHECK(cd.diagram.crossings.empty());
  REQUIRE(cd.components.size() == 1);
  CHECK(cd.origin.at(cd.components[0]) == std::pair<std::string, std::string>{"a", "double"});
  CHECK(validate(cd.diagram).ok);
}

TEST_CASE("lift of the two-passage unknot is two circles") {
  auto cd = lift_to_sphere(parse_diagram(kTwoPassage));
  CHECK(cd.diagram.crossings.empty());
  REQUIRE(cd.components.size() == 2);
  std::set<std::string> tags;
  for (const auto& [id, src] : cd.origin) {
    CHECK(src.first == "a");
    tags.insert(src.second);
  }
  CHECK(tags == std::set<std::string>{"+", "-"});
}

TEST_CASE("lifted component counts follow the class rule") {
  std::mt19937 rng(423991);
  for (int trial = 0; trial < 60; ++trial) {
    int k = 1 + (int)(rng() % 4);
    int len = (int)(rng() % 6);
    std::vector<int> word;
    for (int i = 0; i < len && k > 1; ++i) {
      int g = 1 + (int)(rng() % (k - 1));
      word.push_back(rng() % 2 ? g : -g);
    }
    auto d = projective_braid_closure(k, word);
    REQUIRE(validate(d).ok);
    auto comps = component_decomposition(d);
    auto cd = lift_to_sphere(d);
    REQUIRE(validate(cd.diagram).ok);
    CHECK(cd.diagram.crossings.size() == 2 * d.crossings.size());
    size_t expected = 0;
    for (const auto& c : comps) expected += homology_class(c) == 0 ? 2 : 1;
    CHECK(cd.components.size() == expected);
    // Origin map is a bijection onto base components with consistent tags.
    std::map<std::string, std::set<std::string>> tags;
    for (const auto& [id, src] : cd.origin) tags[src.first].insert(src.second);
    REQUIRE(tags.size() == comps.size());
    for (const auto& c : comps) {
      if (homology_class(c) == 0)
        CHECK(tags.at(c.id) == std::set<std::string>{"+", "-"});
      else
        CHECK(tags.at(c.id) == std::set<std::string>{"double"});
    }
  }
}

TEST_CASE("linking number of the Hopf lift sheets") {
  // sigma_1^2 projective closure: single class-0 component whose two sheets
  // form a Hopf-style pair.
  auto d = projective_braid_closure(2, {1, 1});
  auto comps = component_decomposition(d);
  REQUIRE(comps.size() == 1);
  CHECK(homology_class(comps[0]) == 0);
  auto sl = self_linking(d, comps[0].id);
  CHECK(sl.value == 2);
}

TEST_CASE("linking number on a classical Hopf diagram") {
  auto d = classical_braid_closure(2, {1, 1});
  auto comps = component_decomposition(d);
  REQUIRE(comps.size() == 2);
  ClassicalDiagram cd;
  cd.diagram = d;
  for (const auto& c : comps) cd.components.push_back(c.id);
  int lk = linking_number(cd, comps[0].id, comps[1].id);
  CHECK(std::abs(lk) == 1);
  CHECK(lk == linking_number(cd, comps[1].id, comps[0].id));
}

TEST_CASE("linking number of split circles is zero") {
  ClassicalDiagram cd;
  cd.diagram = parse_diagram("boundary 0\ncircle u\ncircle v\n");
  CHECK(linking_number(cd, "u", "v") == 0);
  CHECK_THROWS_AS(linking_number(cd, "u", "u"), std::invalid_argument);
  CHECK_THROWS_AS(linking_number(cd, "u", "nope"), std::invalid_argument);
}

TEST_CASE("self-linking vanishes on wall-free knots") {
  std::mt19937 rng(77120);
  int tested = 0;
  for (int trial = 0; trial < 2000 && tested < 100; ++trial) {
    int k = 2 + (int)(rng() % 3);
    int len = 1 + (int)(rng() % 8);
    std::vector<int> word;
    for (int i = 0; i < len; ++i) {
      int g = 1 + (int)(rng() % (k - 1));
      word.push_back(rng() % 2 ? g : -g);
    }
    auto d = classical_braid_closure(k, word);
    auto comps = component_decomposition(d);
    if (comps.size() != 1 || comps[0].is_free_circle) continue;
    auto sl = self_linking(d, comps[0].id);
    CHECK(sl.value == 0);
    ++tested;
  }
  CHECK(tested == 100);
}

TEST_CASE("self-linking on class-1 components; two-sheet oracle requires class 0") {
  auto d = parse_diagram(kChord);
  CHECK(self_linking(d, "a").value == 0);  // no crossings at all
  CHECK_THROWS_AS(self_linking(d, "zzz"), std::invalid_argument);
  CHECK_THROWS_AS(two_sheet_linking(d, "a"), std::domain_error);
}

TEST_CASE("self-linking equals two-sheet linking on class-0 knots") {
  std::mt19937 rng(4242);
  int tested = 0;
  while (tested < 60) {
    int k = 2 + 2 * (int)(rng() % 2);  // even strand count -> even passages
    int len = 1 + (int)(rng() % 6);
    std::vector<int> word;
    for (int i = 0; i < len; ++i) {
      int g = 1 + (int)(rng() % (k - 1));
      word.push_back(rng() % 2 ? g : -g);
    }
    auto d = projective_braid_closure(k, word);
    auto comps = component_decomposition(d);
    if (comps.size() != 1 || comps[0].is_free_circle) continue;
    if (homology_class(comps[0]) != 0) continue;
    CHECK(self_linking(d, comps[0].id).value == two_sheet_linking(d, comps[0].id).value);
    ++tested;
  }
}

TEST_CASE("self-linking ignores other components") {
  // Class-0 strand plus a disjoint free circle.
  auto d = projective_braid_closure(2, {1, 1});
  d.free_circles.push_back("zz");
  auto comps = component_decomposition(d);
  std::string knot;
  for (const auto& c : comps)
    if (!c.is_free_circle) knot = c.id;
  CHECK(self_linking(d, knot).value == 2);
}
