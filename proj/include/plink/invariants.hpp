#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "plink/diagram.hpp"
#include "plink/laurent.hpp"

namespace plink {

/// Element of the two-generator skein module: poly * (1 or z), where z is the
/// class of a noncontractible circle.
struct BracketValue {
  LaurentPolynomial poly;
  int epsilon = 0;  // 0: empty-link basis element, 1: noncontractible-circle element

  friend bool operator==(const BracketValue&, const BracketValue&) = default;
};

/// Mod-2 homology class of the whole link: wall crossings mod 2.
inline int homology_class(const ProjectiveDiagram& d) {
  return (d.boundary_count / 2) % 2;
}

inline int homology_class(const LinkComponent& c) { return c.wall_passage_count % 2; }

inline int writhe(const ProjectiveDiagram& d) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("writhe: diagram fails validation");
  int w = 0;
  for (int s : a.crossing_sign) w += s;
  return w;
}

struct StateResolution {
  int contractible = 0;
  int noncontractible = 0;  // 0 or 1
};

namespace detail {

/// Circle count of the state selected by `use_b` (per crossing: false = A
/// smoothing joining {s0,s1},{s2,s3}; true = B joining {s1,s2},{s3,s0}).
inline StateResolution trace_state(const ProjectiveDiagram& d, const DiagramAnalysis& a,
                                   const std::vector<char>& use_b) {
  // Nodes are occurrence positions; every node has exactly two incident
  // links: its arc, and either a smoothing chord or the wall identification.
  const int ncross = (int)d.crossings.size();
  const int n = d.boundary_count / 2;

  // Map position -> arc partner position.
  std::map<int, int> via_arc;
  for (size_t i = 0; i < a.arcs.size(); ++i) {
    via_arc[a.arc_start[i]] = a.arc_end[i];
    via_arc[a.arc_end[i]] = a.arc_start[i];
  }
  // Map position -> local partner (smoothing chord or wall edge). Wall edges
  // count toward the circle's wall-crossing parity.
  std::map<int, int> via_local;
  for (int ci = 0; ci < ncross; ++ci) {
    int s0 = slot_position(ci, 0), s1 = slot_position(ci, 1);
    int s2 = slot_position(ci, 2), s3 = slot_position(ci, 3);
    if (!use_b[ci]) {
      via_local[s0] = s1; via_local[s1] = s0; via_local[s2] = s3; via_local[s3] = s2;
    } else {
      via_local[s1] = s2; via_local[s2] = s1; via_local[s3] = s0; via_local[s0] = s3;
    }
  }
  for (int e = 0; e < n; ++e) {
    via_local[wall_position(e)] = wall_position(e + n);
    via_local[wall_position(e + n)] = wall_position(e);
  }

  StateResolution r;
  std::set<int> visited;
  for (const auto& [start, _] : via_arc) {
    if (visited.count(start)) continue;
    int wall_edges = 0;
    int cur = start;
    // Alternate arc and local links around the circle.
    bool take_arc = true;
    do {
      visited.insert(cur);
      if (take_arc) {
        cur = via_arc.at(cur);
      } else {
        if (is_wall_position(cur)) ++wall_edges;
        cur = via_local.at(cur);
      }
      take_arc = !take_arc;
    } while (cur != start || !take_arc);
    if (wall_edges % 2 == 1)
      ++r.noncontractible;
    else
      ++r.contractible;
  }
  r.contractible += (int)d.free_circles.size();
  if (r.noncontractible > 1)
    throw std::logic_error("state traced more than one noncontractible circle");
  return r;
}

inline int crossing_cap() {
  if (const char* env = std::getenv("PLINK_MAX_CROSSINGS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 20;
}

}  // namespace detail

/// Circle structure of one complete smoothing of the diagram.
inline StateResolution resolve_state(const ProjectiveDiagram& d, const std::vector<char>& use_b) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("resolve_state: diagram fails validation");
  if (use_b.size() != d.crossings.size())
    throw std::invalid_argument("resolve_state: one choice per crossing required");
  return detail::trace_state(d, a, use_b);
}

/// State-sum bracket over the disk model: sum over all 2^c smoothings of
/// A^(alpha-beta) * delta^(circles-1), carrying the noncontractible basis
/// flag separately. Exact; capped at PLINK_MAX_CROSSINGS (default 20).
inline BracketValue drobotukhina_bracket(const ProjectiveDiagram& d) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("bracket: diagram fails validation");
  const int c = (int)d.crossings.size();
  if (c > detail::crossing_cap())
    throw std::runtime_error("bracket: crossing count " + std::to_string(c) +
                             " exceeds cap (set PLINK_MAX_CROSSINGS to raise)");

  BracketValue out;
  bool epsilon_set = false;
  std::vector<char> use_b(c, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << c); ++mask) {
    for (int i = 0; i < c; ++i) use_b[i] = (mask >> i) & 1 ? 1 : 0;
    StateResolution st = detail::trace_state(d, a, use_b);
    int beta = 0;
    for (int i = 0; i < c; ++i) beta += use_b[i];
    int alpha = c - beta;
    int circles = st.contractible + st.noncontractible;
    LaurentPolynomial term = LaurentPolynomial::monomial(1, alpha - beta);
    if (circles == 0) {
      // Entirely empty diagram: single empty state, normalized to 1.
    } else {
      term *= bracket_delta().pow(circles - 1);
    }
    if (!epsilon_set) {
      out.epsilon = st.noncontractible;
      epsilon_set = true;
    } else if (out.epsilon != st.noncontractible) {
      throw std::logic_error("bracket: states disagree on the noncontractible flag");
    }
    out.poly += term;
  }
  return out;
}

/// Writhe-normalized bracket: (-A)^(-3w) * bracket.
inline BracketValue jones_v(const ProjectiveDiagram& d) {
  BracketValue b = drobotukhina_bracket(d);
  b.poly *= minus_a_power(-3 * writhe(d));
  return b;
}

}  // namespace plink
