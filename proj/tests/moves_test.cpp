#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "plink/diagram.hpp"
#include "plink/diagram_ops.hpp"
#include "plink/invariants.hpp"
#include "plink/moves.hpp"

using namespace plink;

namespace {

const char* kCircle = "boundary 0\ncircle c0\n";
const char* kChord = "boundary 2\nwall 0 head a\nwall 1 tail a\n";
const char* kTwoPassage =
    "boundary 4\nwall 1 head a\nwall 2 tail a\nwall 0 head b\nwall 3 tail b\n";
const char* kTrefoil =
    "boundary 0\ncross a 1 4 2 5\ncross b 3 6 4 1\ncross c 5 2 6 3\n";
const char* kKink = "boundary 0\ncross k a b b a\n";

int count_kind(const std::vector<MoveDescriptor>& ms, const std::string& kind) {
  int n = 0;
  for (const auto& m : ms)
    if (m.kind == kind) ++n;
  return n;
}

std::optional<MoveDescriptor> first_kind(const std::vector<MoveDescriptor>& ms,
                                         const std::string& kind) {
  for (const auto& m : ms)
    if (m.kind == kind) return m;
  return std::nullopt;
}

std::multiset<int> class_profile(const ProjectiveDiagram& d) {
  std::multiset<int> out;
  for (const auto& c : component_decomposition(d)) out.insert(homology_class(c));
  return out;
}

}  // namespace

TEST_CASE("kink diagram has an R1- site that removes the crossing") {
  auto d = parse_diagram(kKink);
  auto moves = applicable_moves(d);
  REQUIRE(count_kind(moves, "R1-") >= 1);
  auto m = first_kind(moves, "R1-");
  auto r = apply_move(d, *m);
  CHECK(r.crossings.empty());
  CHECK(r.boundary_count == 0);
  REQUIRE(r.free_circles.size() == 1);
  CHECK(jones_v(r).poly == jones_v(d).poly);
}

TEST_CASE("two-passage unknot has exactly one deduplicated R5- site") {
  auto d = parse_diagram(kTwoPassage);
  auto moves = applicable_moves(d, InsertionCaps{0});
  REQUIRE(count_kind(moves, "R5-") == 1);
  auto m = first_kind(moves, "R5-");
  auto r = apply_move(d, *m);
  CHECK(r.boundary_count == 0);
  CHECK(r.crossings.empty());
  CHECK(r.free_circles.size() == 1);
  CHECK(canonical_code(r) == canonical_code(parse_diagram(kCircle)));
}

TEST_CASE("chord diagram admits no reducing moves") {
  auto d = parse_diagram(kChord);
  auto moves = applicable_moves(d, InsertionCaps{0});
  CHECK(count_kind(moves, "R1-") == 0);
  CHECK(count_kind(moves, "R2-") == 0);
  CHECK(count_kind(moves, "R3") == 0);
  CHECK(count_kind(moves, "R4") == 0);
  CHECK(count_kind(moves, "R5-") == 0);
}

TEST_CASE("reduced alternating diagram admits only insertions") {
  auto d = parse_diagram(kTrefoil);
  auto moves = applicable_moves(d);
  CHECK(count_kind(moves, "R1-") == 0);
  CHECK(count_kind(moves, "R2-") == 0);
  CHECK(count_kind(moves, "R3") == 0);  // alternating trigons are inadmissible
  CHECK(count_kind(moves, "R4") == 0);
  CHECK(count_kind(moves, "R5-") == 0);
  CHECK(count_kind(moves, "R1+") > 0);
  CHECK(count_kind(moves, "R2+") > 0);
  CHECK(count_kind(moves, "R5+") > 0);
}

TEST_CASE("R2+ followed by its inverse returns to the same diagram") {
  auto d = parse_diagram(kTrefoil);
  auto moves = applicable_moves(d);
  auto m = first_kind(moves, "R2+");
  REQUIRE(m);
  auto r = apply_move(d, *m);
  CHECK(r.crossings.size() == d.crossings.size() + 2);
  CHECK(jones_v(r).poly == jones_v(d).poly);
  auto back = first_kind(applicable_moves(r, InsertionCaps{0}), "R2-");
  REQUIRE(back);
  auto d2 = apply_move(r, *back);
  CHECK(canonical_code(d2) == canonical_code(d));
}

TEST_CASE("R1+ creates a removable kink of the requested sign") {
  auto d = parse_diagram(kTrefoil);
  int w0 = writhe(d);
  for (int sign : {+1, -1}) {
    MoveDescriptor m{"R1+", {}, {"1"}, {}, sign};
    auto r = apply_move(d, m);
    CHECK((int)r.crossings.size() == 4);
    CHECK(writhe(r) == w0 + sign);
    CHECK(jones_v(r).poly == jones_v(d).poly);
    CHECK(count_kind(applicable_moves(r, InsertionCaps{0}), "R1-") >= 1);
  }
}

TEST_CASE("braid relation appears as an admissible triangle move") {
  auto d = classical_braid_closure(3, {1, 2, 1});
  auto moves = applicable_moves(d, InsertionCaps{0});
  REQUIRE(count_kind(moves, "R3") >= 1);
  auto m = first_kind(moves, "R3");
  auto r = apply_move(d, *m);
  CHECK(r.crossings.size() == d.crossings.size());
  CHECK(jones_v(r).poly == jones_v(d).poly);
  CHECK(jones_v(r).epsilon == jones_v(d).epsilon);
  // sigma1 sigma2 sigma1 = sigma2 sigma1 sigma2
  CHECK(canonical_code(r) == canonical_code(classical_braid_closure(3, {2, 1, 2})));
}

TEST_CASE("wall slide moves a crossing to the far side and back") {
  auto d = projective_braid_closure(2, {1});
  auto moves = applicable_moves(d, InsertionCaps{0});
  REQUIRE(count_kind(moves, "R4") >= 1);
  auto m = first_kind(moves, "R4");
  auto r = apply_move(d, *m);
  CHECK(r.boundary_count == d.boundary_count);
  CHECK(r.crossings.size() == d.crossings.size());
  CHECK(jones_v(r).poly == jones_v(d).poly);
  CHECK(jones_v(r).epsilon == jones_v(d).epsilon);
  auto back = first_kind(applicable_moves(r, InsertionCaps{0}), "R4");
  REQUIRE(back);
  auto d2 = apply_move(r, *back);
  CHECK(canonical_code(d2) == canonical_code(d));
}

TEST_CASE("R5+ on a free circle yields the two-passage diagram") {
  auto d = parse_diagram(kCircle);
  MoveDescriptor m{"R5+", {}, {"c0"}, {0}, 1};
  auto r = apply_move(d, m);
  CHECK(r.boundary_count == 4);
  CHECK(canonical_code(r) == canonical_code(parse_diagram(kTwoPassage)));
}

TEST_CASE("R5+ on an arc is undone by R5-") {
  auto d = projective_braid_closure(2, {1, 1});
  auto m = first_kind(applicable_moves(d), "R5+");
  REQUIRE(m);
  auto r = apply_move(d, *m);
  CHECK(r.boundary_count == d.boundary_count + 4);
  CHECK(jones_v(r).poly == jones_v(d).poly);
  CHECK(jones_v(r).epsilon == jones_v(d).epsilon);
  bool recovered = false;
  for (const auto& back : applicable_moves(r, InsertionCaps{0})) {
    if (back.kind != "R5-") continue;
    if (canonical_code(apply_move(r, back)) == canonical_code(d)) recovered = true;
  }
  CHECK(recovered);
}

TEST_CASE("stale descriptors are rejected") {
  auto d = parse_diagram(kKink);
  auto m = first_kind(applicable_moves(d), "R1-");
  REQUIRE(m);
  auto r = apply_move(d, *m);
  CHECK_THROWS_AS(apply_move(r, *m), std::invalid_argument);
  MoveDescriptor bogus{"R5-", {}, {"nope"}, {0}, 0};
  CHECK_THROWS_AS(apply_move(d, bogus), std::invalid_argument);
}

TEST_CASE("randomized move applications preserve the evaluation") {
  std::mt19937 rng(20240817);
  std::vector<ProjectiveDiagram> seeds{
      parse_diagram(kCircle),         parse_diagram(kTwoPassage),
      parse_diagram(kTrefoil),        classical_braid_closure(2, {1, 1}),
      projective_braid_closure(2, {1, 1}), projective_braid_closure(3, {1, -2, 1}),
  };
  long long applied = 0;
  for (const auto& seed : seeds) {
    ProjectiveDiagram cur = seed;
    BracketValue v = jones_v(cur);
    auto classes = class_profile(cur);
    size_t ncomp = component_decomposition(cur).size();
    for (int step = 0; step < 110; ++step) {
      auto moves = applicable_moves(cur, InsertionCaps{3});
      std::vector<MoveDescriptor> usable;
      for (const auto& m : moves) {
        bool grows = m.kind.back() == '+';
        if (grows && (cur.crossings.size() >= 9 || cur.boundary_count >= 10)) continue;
        usable.push_back(m);
      }
      if (usable.empty()) break;
      const auto& m = usable[rng() % usable.size()];
      ProjectiveDiagram next = apply_move(cur, m);
      BracketValue nv = jones_v(next);
      REQUIRE(nv.poly == v.poly);
      REQUIRE(nv.epsilon == v.epsilon);
      REQUIRE(component_decomposition(next).size() == ncomp);
      REQUIRE(class_profile(next) == classes);
      cur = std::move(next);
      ++applied;
    }
  }
  CHECK(applied >= 600);
}

TEST_CASE("reduction search finds a wall-free form of the two-passage unknot") {
  auto d = parse_diagram(kTwoPassage);
  auto cert = search_affine_reduction(d);
  REQUIRE(cert);
  CHECK(cert->final_diagram.boundary_count == 0);
  REQUIRE(cert->moves.size() == 1);
  CHECK(cert->moves[0].kind == "R5-");
  CHECK(replay_reduction(d, *cert));
}

TEST_CASE("reduction search on a wall-free diagram is immediate") {
  auto d = parse_diagram(kTrefoil);
  auto cert = search_affine_reduction(d);
  REQUIRE(cert);
  CHECK(cert->moves.empty());
  CHECK(replay_reduction(d, *cert));
}

TEST_CASE("reduction search gives up on the projective chord within budget") {
  auto d = parse_diagram(kChord);
  SearchBudget tight;
  tight.max_depth = 3;
  tight.max_nodes = 100;
  CHECK(!search_affine_reduction(d, tight));
}

TEST_CASE("reduction search unwinds a slide-then-return projective unknot") {
  // sigma1 with two strands closed projectively: one crossing, four passages.
  auto d = projective_braid_closure(2, {1, -1});
  auto cert = search_affine_reduction(d);
  REQUIRE(cert);
  CHECK(cert->final_diagram.boundary_count == 0);
  CHECK(replay_reduction(d, *cert));
}

TEST_CASE("replay rejects a corrupted certificate") {
  auto d = parse_diagram(kTwoPassage);
  auto cert = search_affine_reduction(d);
  REQUIRE(cert);
  ReductionCertificate bad = *cert;
  bad.moves[0].arcs = {"nope"};
  CHECK(!replay_reduction(d, bad));
  ReductionCertificate wrong_end = *cert;
  wrong_end.final_diagram = parse_diagram(kTrefoil);
  CHECK(!replay_reduction(d, wrong_end));
}
