#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "plink/covering.hpp"
#include "plink/group.hpp"

using namespace plink;

namespace {

const char* kCircle = "boundary 0\ncircle c0\n";
const char* kChord = "boundary 2\nwall 0 head a\nwall 1 tail a\n";
const char* kTwoPassage =
    "boundary 4\nwall 1 head a\nwall 2 tail a\nwall 0 head b\nwall 3 tail b\n";
const char* kTrefoil =
    "boundary 0\ncross a 1 4 2 5\ncross b 3 6 4 1\ncross c 5 2 6 3\n";

// Index-2 subgroup presentation for the homomorphism sending h to 1 and all
// meridians to 0 in Z/2, via Schreier rewriting with transversal {1, h}.
// The subgroup is the fundamental group of the lifted complement in the
// sphere, so its abelianization must be free of rank = lifted components.
GroupPresentation index2_kernel(const GroupPresentation& p) {
  int h = (int)p.generators.size() - 1;
  REQUIRE(p.generators[h] == "h");
  // Schreier generators: (coset, generator) pairs; (0, h) is trivial and
  // (1, h) is h^2.
  std::map<std::pair<int, int>, int> gen_of;
  GroupPresentation k;
  for (int t = 0; t < 2; ++t)
    for (int g = 0; g < h; ++g) {
      gen_of[{t, g}] = (int)k.generators.size();
      k.generators.push_back(p.generators[g] + "_" + std::to_string(t));
    }
  gen_of[{1, h}] = (int)k.generators.size();
  k.generators.push_back("z");

  auto rewrite = [&](int coset, const Word& w) {
    Word out;
    int c = coset;
    for (int x : w.letters) {
      int g = std::abs(x) - 1;
      int weight = g == h ? 1 : 0;
      if (x > 0) {
        if (!(g == h && c == 0)) out.letters.push_back(gen_of.at({c, g}) + 1);
        c ^= weight;
      } else {
        c ^= weight;
        if (!(g == h && c == 0)) out.letters.push_back(-(gen_of.at({c, g}) + 1));
      }
    }
    REQUIRE(c == coset);  // relators have even h-weight
    return free_reduce(out);
  };
  for (const auto& r : p.relators) {
    k.relators.push_back(rewrite(0, r));
    k.relators.push_back(rewrite(1, r));
  }
  return k;
}

void check_kernel_matches_lift(const ProjectiveDiagram& d) {
  auto p = fundamental_group_presentation(d);
  auto k = index2_kernel(p);
  auto ab = abelianization(k);
  auto lift = lift_to_sphere(d);
  INFO(serialize(d));
  CHECK(ab.rank == (int)lift.components.size());
  CHECK(ab.torsion.empty());
}

}  // namespace

TEST_CASE("presentation of the free circle") {
  auto p = fundamental_group_presentation(parse_diagram(kCircle));
  REQUIRE(p.generators == std::vector<std::string>{"x_c0", "h"});
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0].letters == std::vector<int>{2, 2});
  auto ab = abelianization(p);
  CHECK(ab.rank == 1);
  CHECK(ab.torsion == std::vector<std::int64_t>{2});
}

TEST_CASE("presentation of the empty diagram") {
  auto p = fundamental_group_presentation(ProjectiveDiagram{});
  REQUIRE(p.generators == std::vector<std::string>{"h"});
  auto ab = abelianization(p);
  CHECK(ab.rank == 0);
  CHECK(ab.torsion == std::vector<std::int64_t>{2});
}

TEST_CASE("presentation of the chord abelianizes to Z") {
  auto p = fundamental_group_presentation(parse_diagram(kChord));
  auto ab = abelianization(p);
  CHECK(ab.rank == 1);
  CHECK(ab.torsion.empty());
}

TEST_CASE("presentation of the two-passage unknot abelianizes to Z + Z/2") {
  auto p = fundamental_group_presentation(parse_diagram(kTwoPassage));
  auto ab = abelianization(p);
  CHECK(ab.rank == 1);
  CHECK(ab.torsion == std::vector<std::int64_t>{2});
}

TEST_CASE("wall-free presentations are Wirtinger plus the h factor") {
  auto p = fundamental_group_presentation(parse_diagram(kTrefoil));
  // 3 strands + h; 3 Wirtinger relators + h^2.
  REQUIRE(p.generators.size() == 4);
  CHECK(p.generators.back() == "h");
  REQUIRE(p.relators.size() == 4);
  int h = (int)p.generators.size();
  for (size_t i = 0; i < 3; ++i) {
    CHECK(p.relators[i].letters.size() == 4);
    for (int x : p.relators[i].letters) CHECK(std::abs(x) != h);
  }
  CHECK(p.relators[3].letters == std::vector<int>{h, h});
  auto ab = abelianization(p);
  CHECK(ab.rank == 1);
  CHECK(ab.torsion == std::vector<std::int64_t>{2});
}

TEST_CASE("smith normal form basics") {
  auto s = smith_normal_form({{2}});
  CHECK(s.diagonal == std::vector<std::int64_t>{2});
  s = smith_normal_form({{2, 0}, {0, 3}});
  CHECK(s.diagonal == std::vector<std::int64_t>{1, 6});
  s = smith_normal_form({{1, 0}, {0, 0}});
  CHECK(s.diagonal == std::vector<std::int64_t>{1});
}

TEST_CASE("smith normal form transforms are consistent") {
  std::mt19937 rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    int r = 1 + (int)(rng() % 4), c = 1 + (int)(rng() % 4);
    IntMatrix a(r, std::vector<std::int64_t>(c));
    for (auto& row : a)
      for (auto& x : row) x = (std::int64_t)(rng() % 9) - 4;
    auto s = smith_normal_form(a);
    // U*A*V == D
    IntMatrix ua(r, std::vector<std::int64_t>(c, 0));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        for (int t = 0; t < r; ++t) ua[i][j] += s.u[i][t] * a[t][j];
    IntMatrix uav(r, std::vector<std::int64_t>(c, 0));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        for (int t = 0; t < c; ++t) uav[i][j] += ua[i][t] * s.v[t][j];
    CHECK(uav == s.d);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (i != j) CHECK(s.d[i][j] == 0);
    for (size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
      CHECK(s.diagonal[i] > 0);
      CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
    }
  }
}

TEST_CASE("abelianization of hand-written presentations") {
  GroupPresentation p;
  p.generators = {"h"};
  p.relators = {{{1, 1}}};
  auto ab = abelianization(p);
  CHECK(ab.rank == 0);
  CHECK(ab.torsion == std::vector<std::int64_t>{2});

  p.generators = {"x"};
  p.relators = {};
  ab = abelianization(p);
  CHECK(ab.rank == 1);
  CHECK(ab.torsion.empty());
}

TEST_CASE("finite quotient counts") {
  GroupPresentation zh;  // <h | h^2>
  zh.generators = {"h"};
  zh.relators = {{{1, 1}}};
  CHECK(find_finite_quotients(zh, 2).quotients.size() == 2);

  GroupPresentation fx;  // <x | >
  fx.generators = {"x"};
  CHECK(find_finite_quotients(fx, 2).quotients.size() == 2);

  GroupPresentation both;  // <x, h | h^2>
  both.generators = {"x", "h"};
  both.relators = {{{2, 2}}};
  CHECK(find_finite_quotients(both, 2).quotients.size() == 4);
}

TEST_CASE("order-2 witness for Z/2 and for the free circle complement") {
  GroupPresentation zh;
  zh.generators = {"h"};
  zh.relators = {{{1, 1}}};
  auto cert = find_order2_witness(zh);
  REQUIRE(cert);
  CHECK(cert->witness.letters == std::vector<int>{1});
  CHECK(replay_order2_certificate(zh, *cert));

  auto p = fundamental_group_presentation(parse_diagram(kCircle));
  cert = find_order2_witness(p);
  REQUIRE(cert);
  CHECK(p.word_to_string(cert->witness) == "h");
  CHECK(replay_order2_certificate(p, *cert));
}

TEST_CASE("no witness in a free group") {
  GroupPresentation fx;
  fx.generators = {"x"};
  CHECK_FALSE(find_order2_witness(fx).has_value());
}

TEST_CASE("order-2 witness for the two-passage unknot") {
  auto p = fundamental_group_presentation(parse_diagram(kTwoPassage));
  auto cert = find_order2_witness(p);
  REQUIRE(cert);
  CHECK(replay_order2_certificate(p, *cert));
}

TEST_CASE("replay rejects corrupted certificates") {
  GroupPresentation zh;
  zh.generators = {"h"};
  zh.relators = {{{1, 1}}};
  auto cert = find_order2_witness(zh);
  REQUIRE(cert);
  auto bad = *cert;
  bad.witness.letters = {};
  CHECK_FALSE(replay_order2_certificate(zh, bad));
  bad = *cert;
  if (!bad.square_proof.empty()) {
    bad.square_proof[0].position += 7;
    CHECK_FALSE(replay_order2_certificate(zh, bad));
  }
  bad = *cert;
  for (auto& img : bad.nontriviality.images) img = perm_identity(bad.nontriviality.degree);
  CHECK_FALSE(replay_order2_certificate(zh, bad));
}

TEST_CASE("index-2 kernel abelianization matches the lift") {
  check_kernel_matches_lift(parse_diagram(kCircle));
  check_kernel_matches_lift(parse_diagram(kChord));
  check_kernel_matches_lift(parse_diagram(kTwoPassage));
  check_kernel_matches_lift(parse_diagram(kTrefoil));
  check_kernel_matches_lift(projective_braid_closure(2, {1, 1}));
  check_kernel_matches_lift(projective_braid_closure(3, {1, -2, 1}));
}

TEST_CASE("index-2 kernel matches the lift on random closures") {
  std::mt19937 rng(909090);
  for (int trial = 0; trial < 40; ++trial) {
    int k = 1 + (int)(rng() % 3);
    int len = (int)(rng() % 6);
    std::vector<int> word;
    for (int i = 0; i < len && k > 1; ++i) {
      int g = 1 + (int)(rng() % (k - 1));
      word.push_back(rng() % 2 ? g : -g);
    }
    check_kernel_matches_lift(projective_braid_closure(k, word));
  }
}

TEST_CASE("no order-2 certificate for lifted classical complements") {
  // Link groups of sphere links are torsion-free; the searcher must not
  // fabricate certificates there (small budgets).
  for (const char* src : {kTrefoil}) {
    auto lift = lift_to_sphere(parse_diagram(src));
    auto p = fundamental_group_presentation(lift.diagram);
    // Drop the h factor: keep only Wirtinger relators, mirroring a classical
    // complement presentation.
    GroupPresentation cls = p;
    cls.relators.pop_back();
    cls.generators.pop_back();
    WitnessBudget tiny;
    tiny.max_word_len = 2;
    tiny.max_nodes = 5'000;
    tiny.max_degree = 3;
    auto cert = find_order2_witness(cls, tiny);
    CHECK_FALSE(cert.has_value());
  }
}
