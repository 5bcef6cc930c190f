#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plink/diagram.hpp"
#include "plink/diagram_ops.hpp"
#include "plink/invariants.hpp"

namespace plink {

/// Two-fold cover of a projective diagram: a wall-free sphere diagram plus
/// the component correspondence. Sheet tags: "+" / "-" for a class-0 base
/// component (two lifted circles), "double" for class 1 (one circle).
struct ClassicalDiagram {
  ProjectiveDiagram diagram;  // boundary_count 0
  std::vector<std::string> components;
  std::map<std::string, std::pair<std::string, std::string>> origin;  // lifted -> (base, tag)
};

inline ClassicalDiagram lift_to_sphere(const ProjectiveDiagram& d) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("lift_to_sphere: diagram fails validation");
  const int n = d.boundary_count / 2;

  auto lab = [](int sheet, const std::string& arc) { return std::to_string(sheet) + "_" + arc; };

  // Wall gluing identifies lifted arc ends across sheets; merge the labels.
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) -> std::string {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    return parent[x] = find(it->second);
  };
  auto unite = [&](const std::string& x, const std::string& y) {
    std::string rx = find(x), ry = find(y);
    if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
  };
  for (const auto& arc : a.arcs)
    for (int s : {0, 1}) parent.emplace(lab(s, arc), lab(s, arc));

  for (int i = 0; i < n; ++i) {
    const WallPassage* p = d.passage_at(i);
    const WallPassage* q = d.passage_at(i + n);
    const std::string& head = p->is_head ? p->arc : q->arc;
    const std::string& tail = p->is_head ? q->arc : p->arc;
    unite(lab(0, head), lab(1, tail));
    unite(lab(1, head), lab(0, tail));
  }

  ClassicalDiagram out;
  out.diagram.boundary_count = 0;
  std::set<std::string> crossed;  // label classes that touch a crossing
  for (const auto& c : d.crossings) {
    Crossing inner{"0_" + c.id,
                   {find(lab(0, c.slots[0])), find(lab(0, c.slots[1])), find(lab(0, c.slots[2])),
                    find(lab(0, c.slots[3]))}};
    // The deck transformation reverses the planar rotation and exchanges
    // over and under, which together keep crossing signs. The reversed
    // rotation (s0, s3, s2, s1) is re-anchored at the old over-in slot so the
    // new under strand keeps its flow direction.
    int oin = a.over_in_slot[&c - d.crossings.data()];
    auto rev = [&](int k) { return (oin + 4 - k) % 4; };  // reversed order from oin
    Crossing outer{"1_" + c.id,
                   {find(lab(1, c.slots[rev(0)])), find(lab(1, c.slots[rev(1)])),
                    find(lab(1, c.slots[rev(2)])), find(lab(1, c.slots[rev(3)]))}};
    for (const auto& s : inner.slots) crossed.insert(s);
    for (const auto& s : outer.slots) crossed.insert(s);
    out.diagram.crossings.push_back(std::move(inner));
    out.diagram.crossings.push_back(std::move(outer));
  }
  // Label classes that never reach a crossing close up into circles.
  std::set<std::string> circle_reps;
  for (const auto& arc : a.arcs)
    for (int s : {0, 1}) {
      std::string r = find(lab(s, arc));
      if (!crossed.count(r)) circle_reps.insert(r);
    }
  for (const auto& r : circle_reps) out.diagram.free_circles.push_back(r);
  for (const auto& c : d.free_circles)
    for (int s : {0, 1}) out.diagram.free_circles.push_back(lab(s, c));

  // Component correspondence.
  DiagramAnalysis la = analyze(out.diagram);
  if (!la.report.ok) throw std::logic_error("lift_to_sphere: lifted diagram fails validation");
  auto base_of = [&](const std::string& lifted_arc) {
    // Strip the sheet prefix of the class representative.
    std::string base_arc = lifted_arc.substr(2);
    auto it = a.arc_index.find(base_arc);
    if (it != a.arc_index.end()) return a.components[a.arc_component[it->second]].id;
    return base_arc;  // base free circle
  };
  // Base component -> its lifted components, in deterministic order.
  std::map<std::string, std::vector<std::string>> fibers;
  for (const auto& lc : la.components) {
    std::string member = lc.is_free_circle ? lc.id : lc.cycle.front();
    fibers[base_of(member)].push_back(lc.id);
    out.components.push_back(lc.id);
  }
  for (auto& [base_id, lifted] : fibers) {
    std::sort(lifted.begin(), lifted.end());
    if (lifted.size() == 1) {
      out.origin[lifted[0]] = {base_id, "double"};
    } else {
      // The sheet containing the sheet-0 copy of the base id arc is "+".
      std::string plus_rep = find(parent.count("0_" + base_id) ? "0_" + base_id : lifted[0]);
      for (const auto& id : lifted) {
        bool is_plus;
        // Does this lifted component contain plus_rep?
        is_plus = false;
        for (const auto& lc : la.components) {
          if (lc.id != id) continue;
          if (lc.is_free_circle) {
            is_plus = (lc.id == plus_rep);
          } else {
            for (const auto& arc : lc.cycle)
              if (arc == plus_rep) is_plus = true;
          }
        }
        out.origin[id] = {base_id, is_plus ? "+" : "-"};
      }
    }
  }
  return out;
}

/// Half the signed count of crossings between the two named components.
inline int linking_number(const ClassicalDiagram& cd, const std::string& a,
                          const std::string& b) {
  if (a == b) throw std::invalid_argument("linking_number: components must differ");
  DiagramAnalysis an = analyze(cd.diagram);
  if (!an.report.ok) throw std::invalid_argument("linking_number: diagram fails validation");
  bool have_a = false, have_b = false;
  for (size_t i = 0; i < an.components.size(); ++i) {
    have_a = have_a || an.components[i].id == a;
    have_b = have_b || an.components[i].id == b;
  }
  if (!have_a || !have_b) throw std::invalid_argument("linking_number: unknown component");
  int sum = 0;
  for (size_t ci = 0; ci < cd.diagram.crossings.size(); ++ci) {
    const Crossing& c = cd.diagram.crossings[ci];
    auto comp_id = [&](const std::string& arc) {
      return an.components[an.arc_component[an.arc_index.at(arc)]].id;
    };
    std::string under = comp_id(c.slots[0]);
    std::string over = comp_id(c.slots[an.over_in_slot[ci]]);
    if ((under == a && over == b) || (under == b && over == a)) sum += an.crossing_sign[ci];
  }
  return sum / 2;
}

struct SelfLinking {
  std::string component;
  int value = 0;
};

/// Self-linking of a knot component, computed on the diagram with all other
/// components removed.
///
/// Walk the component once and give every point a parity: the number of wall
/// passages seen so far, mod 2. The value is |sum of signs of the crossings
/// whose two strands carry different parities|. Changing the starting point
/// flips every parity at once, so the mixed-parity crossing set — and the
/// value — is well defined.
///
/// For a class-0 component the preimage in the two-fold cover has two
/// circles, the parity classes are exactly the two sheets, and the value is
/// |lk| of those circles (each mixed crossing lifts to one crossing of each
/// sheet pair orientation; see two_sheet_linking below for the oracle
/// computed directly on the lifted diagram). For a class-1 component the
/// preimage is connected and the parity classes are the two halves between
/// the lifts of the base point; the same sum computes their linking number.
inline SelfLinking self_linking(const ProjectiveDiagram& d, const std::string& component_id) {
  DiagramAnalysis a0 = analyze(d);
  if (!a0.report.ok) throw std::invalid_argument("self_linking: diagram fails validation");
  bool known = false, circle = false;
  for (const auto& c : a0.components)
    if (c.id == component_id) known = true, circle = c.is_free_circle;
  if (!known) throw std::invalid_argument("self_linking: unknown component");
  if (circle) return {component_id, 0};

  ProjectiveDiagram sub = delete_components(d, {component_id});
  DiagramAnalysis a = analyze(sub);
  if (a.components.size() != 1) throw std::logic_error("self_linking: expected one component");
  // All of the component's crossings were with the deleted strands: the
  // sub-diagram degenerates to a free circle and the value is 0.
  if (a.components[0].cycle.empty()) return {component_id, 0};

  const int bc = sub.boundary_count;
  const int n = bc / 2;
  std::vector<int> parity(a.arcs.size(), -1);
  int arc = a.arc_index.at(a.components[0].cycle.front());
  const int start = arc;
  int p = 0;
  do {
    parity[arc] = p;
    int endpos = a.arc_end[arc];
    if (is_wall_position(endpos)) {
      int e = position_endpoint(endpos);
      arc = a.arc_index.at(sub.passage_at((e + n) % bc)->arc);
      p ^= 1;
    } else {
      int ci = position_crossing(endpos), s = position_slot(endpos);
      arc = a.arc_index.at(sub.crossings[ci].slots[(s + 2) % 4]);
    }
  } while (arc != start);

  int sum = 0;
  for (size_t ci = 0; ci < sub.crossings.size(); ++ci) {
    const Crossing& c = sub.crossings[ci];
    int under_in = a.arc_index.at(c.slots[0]);
    int over_in = a.arc_index.at(c.slots[a.over_in_slot[ci]]);
    if (parity[under_in] != parity[over_in]) sum += a.crossing_sign[ci];
  }
  return {component_id, sum < 0 ? -sum : sum};
}

/// |lk| of the two lifted sheets of a class-0 component, computed directly on
/// the lifted diagram. Independent oracle for self_linking on class-0 input.
inline SelfLinking two_sheet_linking(const ProjectiveDiagram& d, const std::string& component_id) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("two_sheet_linking: diagram fails validation");
  const LinkComponent* comp = nullptr;
  for (const auto& c : a.components)
    if (c.id == component_id) comp = &c;
  if (!comp) throw std::invalid_argument("two_sheet_linking: unknown component");
  if (homology_class(*comp) != 0)
    throw std::domain_error("NOT_NULL_HOMOLOGOUS: two-sheet linking needs a class-0 component");

  ProjectiveDiagram sub = delete_components(d, {component_id});
  ClassicalDiagram lift = lift_to_sphere(sub);
  std::vector<std::string> sheets;
  for (const auto& [lifted, src] : lift.origin)
    if (src.second != "double") sheets.push_back(lifted);
  if (sheets.size() != 2) throw std::logic_error("two_sheet_linking: expected exactly two sheets");
  int lk = linking_number(lift, sheets[0], sheets[1]);
  return {component_id, lk < 0 ? -lk : lk};
}

}  // namespace plink
