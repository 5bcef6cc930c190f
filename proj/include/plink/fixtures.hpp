#pragma once

// Compiled-in catalog of named reference diagrams used by the test suites
// and the `plink fixtures` subcommand. Every entry is a .pld source string
// that passes validation.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plink/diagram.hpp"

namespace plink {

struct Fixture {
  std::string name;
  std::string pld;
  std::string note;
};

/// Catalog entries, in stable listing order.
inline const std::vector<Fixture>& fixture_catalog() {
  static const std::vector<Fixture> entries = {
      {"unknot-affine",
       "boundary 0\n"
       "circle c0\n",
       "crossing-free circle away from the wall"},

      {"rp1-chord",
       "boundary 2\n"
       "wall 0 head a\n"
       "wall 1 tail a\n",
       "single chord through the wall; homology class 1"},

      {"unknot-two-passages",
       "boundary 4\n"
       "wall 1 head a\n"
       "wall 2 tail a\n"
       "wall 0 head b\n"
       "wall 3 tail b\n",
       "unknot crossing the wall twice; reduces by one wall-chord removal"},

      {"trefoil-affine",
       "boundary 0\n"
       "cross x0 g1 g0 g3 g2\n"
       "cross x1 g2 g3 g5 g4\n"
       "cross x2 g4 g5 g0 g1\n",
       "closure of the two-strand braid with three positive half-twists"},

      {"hopf-affine",
       "boundary 0\n"
       "cross x0 g1 g0 g3 g2\n"
       "cross x1 g2 g3 g0 g1\n",
       "closure of the two-strand braid with two positive half-twists"},

      {"2_1",
       "boundary 4\n"
       "cross x0 g1 g0 g3 g2\n"
       "cross x1 g2 g3 g5 g4\n"
       "wall 0 tail g1\n"
       "wall 1 tail g0\n"
       "wall 2 head g5\n"
       "wall 3 head g4\n",
       "two-crossing projective knot; class 0, self-linking 2"},

      {"5_2",
       "boundary 8\n"
       "cross x0 g1 g5 g4 g2\n"
       "cross x1 g5 g7 g6 g4\n"
       "cross x2 g7 g0 g9 g8\n"
       "cross x3 g8 g11 g10 g6\n"
       "cross x4 g11 g9 g13 g12\n"
       "wall 0 tail g3\n"
       "wall 1 tail g2\n"
       "wall 2 tail g1\n"
       "wall 3 tail g0\n"
       "wall 4 head g13\n"
       "wall 5 head g12\n"
       "wall 6 head g10\n"
       "wall 7 head g3\n",
       "five-crossing projective knot; class 0, self-linking 0, mixed "
       "bracket exponents mod 4"},

      {"5_9",
       "boundary 6\n"
       "cross p1 g0m g0kk g0k g0kt\n"
       "cross p g0ss g0km g0ssm g0kt0\n"
       "cross p0 g0km g0sst g0kt g0ssm\n"
       "cross p2 g0u g0km0 g0um g0k\n"
       "cross p3 g0km0 g0ut g0kt0 g0um\n"
       "wall 0 head g0sst\n"
       "wall 1 tail g0m\n"
       "wall 2 head g0kk\n"
       "wall 3 tail g0u\n"
       "wall 4 head g0ut\n"
       "wall 5 tail g0ss\n",
       "five-crossing projective knot; class 1, self-linking 3, bracket "
       "exponents all congruent mod 4"},
  };
  return entries;
}

inline const Fixture* find_fixture(const std::string& name) {
  for (const auto& f : fixture_catalog())
    if (f.name == name) return &f;
  return nullptr;
}

inline ProjectiveDiagram fixture_diagram(const std::string& name) {
  const Fixture* f = find_fixture(name);
  if (!f) throw std::invalid_argument("unknown fixture: " + name);
  return parse_diagram(f->pld);
}

}  // namespace plink
