#include <catch2/catch_amalgamated.hpp>

#include "plink/diagram.hpp"

using namespace plink;

namespace {

const char* kCircle = "boundary 0\ncircle c0\n";
const char* kChord = "boundary 2\nwall 0 head a\nwall 1 tail a\n";
const char* kTwoPassage =
    "boundary 4\nwall 1 head a\nwall 2 tail a\nwall 0 head b\nwall 3 tail b\n";
const char* kTrefoil =
    "boundary 0\ncross a 1 4 2 5\ncross b 3 6 4 1\ncross c 5 2 6 3\n";

bool has_error(const ValidationReport& r, const std::string& code) {
  for (const auto& e : r.errors)
    if (e.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("parse free circle") {
  auto d = parse_diagram(kCircle);
  CHECK(d.boundary_count == 0);
  CHECK(d.crossings.empty());
  REQUIRE(d.free_circles.size() == 1);
  CHECK(d.free_circles[0] == "c0");
}

TEST_CASE("parse chord diagram") {
  auto d = parse_diagram(kChord);
  CHECK(d.boundary_count == 2);
  REQUIRE(d.wall_passages.size() == 2);
  const WallPassage* p0 = d.passage_at(0);
  REQUIRE(p0);
  CHECK(p0->is_head);
  CHECK(p0->arc == "a");
  const WallPassage* p1 = d.passage_at(1);
  REQUIRE(p1);
  CHECK_FALSE(p1->is_head);
}

TEST_CASE("parse two-passage unknot") {
  auto d = parse_diagram(kTwoPassage);
  CHECK(d.boundary_count == 4);
  CHECK(d.wall_passages.size() == 4);
  CHECK(validate(d).ok);
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_diagram("boundary 3\n"), parse_error);
  CHECK_THROWS_AS(parse_diagram("boundary 0\nboundary 0\n"), parse_error);
  CHECK_THROWS_AS(parse_diagram("frob 1\n"), parse_error);
  CHECK_THROWS_AS(parse_diagram("boundary 2\nwall 0 head a\nwall 0 tail a\n"), parse_error);
  CHECK_THROWS_AS(parse_diagram("boundary 2\nwall 0 head a\nwall 1 sideways a\n"), parse_error);
  CHECK_THROWS_AS(parse_diagram("boundary 2\nwall 0 head a\nwall 1 tail b\n"), parse_error);  // arc used once
  CHECK_THROWS_AS(parse_diagram("boundary 0\ncircle c\ncircle c\n"), parse_error);
  CHECK_THROWS_AS(parse_diagram("boundary 0\ncross a 1 1 1 1\n"), parse_error);  // arc used 4 times
}

TEST_CASE("comments and blank lines are ignored") {
  auto d = parse_diagram("# intro\n\nboundary 0  # trailing\ncircle c0\n");
  CHECK(d.free_circles.size() == 1);
}

TEST_CASE("round-trip on catalog texts") {
  for (const char* src : {kCircle, kChord, kTwoPassage, kTrefoil}) {
    auto d = parse_diagram(src);
    CHECK(parse_diagram(serialize(d)) == d);
  }
}

TEST_CASE("validate accepts good diagrams") {
  for (const char* src : {kCircle, kChord, kTwoPassage, kTrefoil}) {
    auto r = validate(parse_diagram(src));
    INFO(src);
    CHECK(r.ok);
    CHECK(r.euler_characteristic == 2);
  }
}

TEST_CASE("validate flags continuation mismatch") {
  // Both endpoints 1 and 3 are heads: antipodal roles must differ.
  ProjectiveDiagram d;
  d.boundary_count = 4;
  d.wall_passages = {{1, {"a", true}},
                     {3, {"a", true}},
                     {0, {"b", true}},
                     {2, {"b", false}}};
  auto r = validate(d);
  CHECK_FALSE(r.ok);
  CHECK(has_error(r, "CONTINUATION_MISMATCH"));
}

TEST_CASE("validate flags structural defects") {
  ProjectiveDiagram d;
  d.boundary_count = 2;
  d.wall_passages = {{0, {"a", true}}, {5, {"a", false}}};
  CHECK(has_error(validate(d), "ENDPOINT_RANGE"));

  d.wall_passages = {{0, {"a", true}}, {0, {"a", false}}};
  CHECK(has_error(validate(d), "DUPLICATE_ENDPOINT"));

  d.wall_passages = {{0, {"a", true}}, {1, {"a", false}}};
  d.boundary_count = 4;
  CHECK(has_error(validate(d), "UNUSED_ENDPOINT"));
}

TEST_CASE("validate flags orientation contradiction") {
  // An arc with two ends: head at both antipodes of distinct arcs is caught
  // by continuation; an inconsistent crossing pattern must trip the
  // orientation solver instead. Arc '1' ends at both slot0 positions.
  ProjectiveDiagram d;
  d.boundary_count = 0;
  d.crossings = {{"a", {"1", "2", "3", "4"}}, {"b", {"1", "3", "2", "4"}}};
  auto r = validate(d);
  CHECK_FALSE(r.ok);
  CHECK(has_error(r, "ARC_ORIENTATION"));
}

TEST_CASE("validate flags a nonplanar rotation system") {
  // Trefoil slots scrambled at one crossing so that the traced map is not
  // spherical.
  auto d = parse_diagram(kTrefoil);
  std::swap(d.crossings[0].slots[1], d.crossings[0].slots[2]);
  auto r = validate(d);
  if (!r.ok) {
    CHECK((has_error(r, "EULER_CHARACTERISTIC") || has_error(r, "ARC_ORIENTATION")));
  }
  CHECK_FALSE(r.ok);
}

TEST_CASE("component decomposition") {
  auto comps = component_decomposition(parse_diagram(kTwoPassage));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].wall_passage_count == 2);
  CHECK_FALSE(comps[0].is_free_circle);
  CHECK(comps[0].cycle.size() == 2);

  comps = component_decomposition(parse_diagram(kTrefoil));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].wall_passage_count == 0);
  CHECK(comps[0].cycle.size() == 6);

  comps = component_decomposition(parse_diagram(kCircle));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].is_free_circle);
  CHECK(comps[0].id == "c0");
}

TEST_CASE("component decomposition of chord") {
  auto comps = component_decomposition(parse_diagram(kChord));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].wall_passage_count == 1);
  CHECK(comps[0].cycle == std::vector<std::string>{"a"});
}

TEST_CASE("crossing signs of the trefoil are uniform") {
  auto d = parse_diagram(kTrefoil);
  auto a = analyze(d);
  REQUIRE(a.report.ok);
  int s = a.crossing_sign[0];
  CHECK((s == 1 || s == -1));
  CHECK(a.crossing_sign[1] == s);
  CHECK(a.crossing_sign[2] == s);
}

TEST_CASE("empty diagram validates") {
  ProjectiveDiagram d;
  auto r = validate(d);
  CHECK(r.ok);
  CHECK(r.euler_characteristic == 2);
}
