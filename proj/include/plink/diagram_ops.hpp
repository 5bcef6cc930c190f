#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "plink/diagram.hpp"

namespace plink {

// ---------------------------------------------------------------------------
// Sublink extraction
// ---------------------------------------------------------------------------

/// Keeps only the named components. Crossings between a kept and a discarded
/// strand are smoothed into the kept strand; wall endpoints are renumbered
/// (antipodal pairs always leave together, so the pairing survives).
inline ProjectiveDiagram delete_components(const ProjectiveDiagram& d,
                                           const std::set<std::string>& keep) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("delete_components: diagram fails validation");

  std::set<std::string> known;
  for (const auto& c : a.components) known.insert(c.id);
  for (const auto& id : keep)
    if (!known.count(id)) throw std::invalid_argument("unknown component id '" + id + "'");

  std::vector<char> comp_kept(a.components.size(), 0);
  for (size_t i = 0; i < a.components.size(); ++i) comp_kept[i] = keep.count(a.components[i].id) ? 1 : 0;
  auto arc_kept = [&](int arc) { return comp_kept[a.arc_component[arc]] != 0; };

  // Stitches: at a smoothed crossing the kept strand's in-arc is glued to its
  // out-arc. successor[u] = v means "end of u continues as start of v".
  std::map<int, int> successor;
  std::vector<char> cross_kept(d.crossings.size(), 0);
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    const Crossing& c = d.crossings[ci];
    int oin = a.over_in_slot[ci], oout = (oin == 1) ? 3 : 1;
    int under_in = a.arc_index.at(c.slots[0]), under_out = a.arc_index.at(c.slots[2]);
    int over_in = a.arc_index.at(c.slots[oin]), over_out = a.arc_index.at(c.slots[oout]);
    bool uk = arc_kept(under_in), ok_ = arc_kept(over_in);
    if (uk && ok_) {
      cross_kept[ci] = 1;
    } else if (uk) {
      successor[under_in] = under_out;
    } else if (ok_) {
      successor[over_in] = over_out;
    }
  }

  // Merge stitch chains; a chain closing on itself becomes a free circle.
  std::set<int> stitch_targets;
  for (const auto& [u, v] : successor) stitch_targets.insert(v);
  std::map<std::string, std::string> rename;  // old arc label -> merged label
  std::vector<std::string> new_circles;
  std::vector<char> arc_done(a.arcs.size(), 0);
  for (size_t u = 0; u < a.arcs.size(); ++u) {
    if (!arc_kept((int)u) || arc_done[u]) continue;
    if (stitch_targets.count((int)u)) continue;  // chain interior or tail; handled from its head
    // u is a chain head (its start position survives) or an untouched arc.
    std::vector<int> chain{(int)u};
    int cur = (int)u;
    while (successor.count(cur)) {
      cur = successor[cur];
      if (cur == (int)u) break;  // cannot happen for a head; guard anyway
      chain.push_back(cur);
    }
    std::string label = a.arcs[chain[0]];
    for (int x : chain) label = std::min(label, a.arcs[x]);
    for (int x : chain) {
      rename[a.arcs[x]] = label;
      arc_done[x] = 1;
    }
  }
  // Remaining kept arcs sit on pure stitch cycles: crossing-free circles now.
  for (size_t u = 0; u < a.arcs.size(); ++u) {
    if (!arc_kept((int)u) || arc_done[u]) continue;
    std::vector<int> cycle{(int)u};
    int cur = successor.at((int)u);
    while (cur != (int)u) {
      cycle.push_back(cur);
      cur = successor.at(cur);
    }
    std::string label = a.arcs[cycle[0]];
    for (int x : cycle) label = std::min(label, a.arcs[x]);
    for (int x : cycle) arc_done[x] = 1;
    new_circles.push_back(label);
  }

  ProjectiveDiagram out;
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    if (!cross_kept[ci]) continue;
    Crossing c = d.crossings[ci];
    for (auto& s : c.slots) s = rename.at(s);
    out.crossings.push_back(std::move(c));
  }
  std::vector<int> kept_endpoints;
  for (const auto& [e, p] : d.wall_passages)
    if (arc_kept(a.arc_index.at(p.arc))) kept_endpoints.push_back(e);
  std::sort(kept_endpoints.begin(), kept_endpoints.end());
  auto new_index = [&](int e) {
    return (int)(std::lower_bound(kept_endpoints.begin(), kept_endpoints.end(), e) -
                 kept_endpoints.begin());
  };
  for (const auto& [e, p] : d.wall_passages)
    if (arc_kept(a.arc_index.at(p.arc)))
      out.wall_passages.emplace_back(new_index(e), WallPassage{rename.at(p.arc), p.is_head});
  out.boundary_count = (int)kept_endpoints.size();
  for (size_t i = 0; i < a.components.size(); ++i)
    if (comp_kept[i] && a.components[i].is_free_circle) out.free_circles.push_back(a.components[i].id);
  for (auto& c : new_circles) out.free_circles.push_back(std::move(c));
  std::sort(out.free_circles.begin(), out.free_circles.end());
  return out;
}

// ---------------------------------------------------------------------------
// Canonical code
// ---------------------------------------------------------------------------

namespace detail {

// Breadth-first arc numbering from the given seeds; label-free and
// deterministic. Crossings pull in their remaining slots in rotation order.
inline void canonical_bfs(const ProjectiveDiagram& d, const DiagramAnalysis& a,
                          const std::vector<int>& seeds, std::vector<int>& number, int& next) {
  std::vector<int> queue;
  auto take = [&](int arc) {
    if (number[arc] >= 0) return;
    number[arc] = next++;
    queue.push_back(arc);
  };
  for (int s : seeds) take(s);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int arc = queue[qi];
    for (int pos : {a.arc_start[arc], a.arc_end[arc]}) {
      if (is_wall_position(pos)) continue;
      int ci = position_crossing(pos), j = position_slot(pos);
      for (int t = 1; t < 4; ++t)
        take(a.arc_index.at(d.crossings[ci].slots[(j + t) % 4]));
    }
  }
}

inline std::string encode_crossings(const ProjectiveDiagram& d, const DiagramAnalysis& a,
                                    const std::vector<int>& number, bool numbered_only) {
  std::vector<std::array<int, 4>> tuples;
  for (const auto& c : d.crossings) {
    std::array<int, 4> t{};
    bool all = true;
    for (int s = 0; s < 4; ++s) {
      t[s] = number[a.arc_index.at(c.slots[s])];
      if (t[s] < 0) all = false;
    }
    if (all || !numbered_only) tuples.push_back(t);
  }
  std::sort(tuples.begin(), tuples.end());
  std::ostringstream os;
  for (const auto& t : tuples) os << "(" << t[0] << "," << t[1] << "," << t[2] << "," << t[3] << ")";
  return os.str();
}

}  // namespace detail

/// Relabeling- and basepoint-rotation-invariant code; equal for isomorphic
/// diagrams, stable across runs.
inline std::string canonical_code(const ProjectiveDiagram& d) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("canonical_code: diagram fails validation");
  const int bc = d.boundary_count;
  const int narcs = (int)a.arcs.size();

  std::string best;
  const int rotations = bc > 0 ? bc : 1;
  for (int r = 0; r < rotations; ++r) {
    std::vector<int> number(narcs, -1);
    int next = 0;
    std::ostringstream os;
    os << "B" << bc << "|W:";
    if (bc > 0) {
      std::vector<int> seeds;
      for (int e = 0; e < bc; ++e) {
        const WallPassage* p = d.passage_at((e + r) % bc);
        seeds.push_back(a.arc_index.at(p->arc));
      }
      detail::canonical_bfs(d, a, seeds, number, next);
      for (int e = 0; e < bc; ++e) {
        const WallPassage* p = d.passage_at((e + r) % bc);
        os << (p->is_head ? "h" : "t") << number[a.arc_index.at(p->arc)] << ";";
      }
    }
    os << "|X:" << detail::encode_crossings(d, a, number, true);

    // Clusters not connected to the wall: canonicalize each independently
    // over its possible start arcs, then sort the cluster codes.
    std::vector<std::string> cluster_codes;
    std::vector<char> in_cluster(narcs, 0);
    for (int u = 0; u < narcs; ++u) {
      if (number[u] >= 0 || in_cluster[u]) continue;
      std::vector<int> members;
      std::vector<int> probe(narcs, -1);
      int pn = 0;
      detail::canonical_bfs(d, a, {u}, probe, pn);
      for (int x = 0; x < narcs; ++x)
        if (probe[x] >= 0 && number[x] < 0) {
          members.push_back(x);
          in_cluster[x] = 1;
        }
      std::string cbest;
      for (int s : members) {
        std::vector<int> local(narcs, -1);
        int ln = 0;
        detail::canonical_bfs(d, a, {s}, local, ln);
        std::string code = detail::encode_crossings(d, a, local, true);
        if (cbest.empty() || code < cbest) cbest = code;
      }
      cluster_codes.push_back(cbest);
    }
    std::sort(cluster_codes.begin(), cluster_codes.end());
    os << "|CL:";
    for (const auto& c : cluster_codes) os << "[" << c << "]";
    os << "|O:" << d.free_circles.size();
    std::string code = os.str();
    if (best.empty() || code < best) best = code;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Braid closures (diagram constructors used by tests and fixtures)
// ---------------------------------------------------------------------------

namespace detail {

struct BraidState {
  ProjectiveDiagram d;
  std::vector<std::string> current;  // arc occupying each strand position (1-based, [0] unused)
  int fresh = 0;

  std::string new_arc() { return "g" + std::to_string(fresh++); }

  // Letter +p: strand at position p crosses over strand p+1; -p: under.
  // Strands flow downward; slots follow the counterclockwise rotation rule.
  void apply_letter(int letter) {
    int p = letter > 0 ? letter : -letter;
    std::string L = current[p], R = current[p + 1];
    std::string A = new_arc();  // left strand, continues at position p+1
    std::string B = new_arc();  // right strand, continues at position p
    Crossing c;
    c.id = "x" + std::to_string(d.crossings.size());
    if (letter > 0) {
      c.slots = {R, L, B, A};  // under-in NE, over-in NW, under-out SW, over-out SE
    } else {
      c.slots = {L, B, A, R};  // under-in NW, CCW: SW, SE, NE
    }
    d.crossings.push_back(std::move(c));
    current[p] = B;
    current[p + 1] = A;
  }
};

}  // namespace detail

/// Projective closure of a braid on k strands: all strands pierce the wall.
/// Top position p (left to right, 1-based) is endpoint k-p; bottom position p
/// is endpoint k+p-1. Words are sequences of nonzero letters with |letter| < k.
inline ProjectiveDiagram projective_braid_closure(int k, const std::vector<int>& word) {
  detail::BraidState st;
  st.d.boundary_count = 2 * k;
  st.current.resize(k + 1);
  std::vector<std::string> top(k + 1);
  for (int p = 1; p <= k; ++p) {
    top[p] = st.new_arc();
    st.current[p] = top[p];
  }
  for (int w : word) st.apply_letter(w);
  for (int p = 1; p <= k; ++p) {
    st.d.wall_passages.emplace_back(k - p, WallPassage{top[p], false});           // tail at top
    st.d.wall_passages.emplace_back(k + p - 1, WallPassage{st.current[p], true});  // head at bottom
  }
  return st.d;
}

/// Classical (wall-free) closure of a braid on k strands.
inline ProjectiveDiagram classical_braid_closure(int k, const std::vector<int>& word) {
  detail::BraidState st;
  st.d.boundary_count = 0;
  st.current.resize(k + 1);
  std::vector<std::string> top(k + 1);
  for (int p = 1; p <= k; ++p) {
    top[p] = st.new_arc();
    st.current[p] = top[p];
  }
  for (int w : word) st.apply_letter(w);
  // Close position p by identifying the bottom arc with the top arc.
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) -> std::string {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    return parent[x] = find(it->second);
  };
  for (int p = 1; p <= k; ++p) {
    std::string ra = find(st.current[p]), rb = find(top[p]);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  ProjectiveDiagram out;
  std::set<std::string> used;
  for (Crossing c : st.d.crossings) {
    for (auto& s : c.slots) {
      s = find(s);
      used.insert(s);
    }
    out.crossings.push_back(std::move(c));
  }
  // Strand positions never crossed become free circles.
  std::set<std::string> circles;
  for (int p = 1; p <= k; ++p) {
    std::string rep = find(top[p]);
    if (!used.count(rep)) circles.insert(rep);
  }
  for (const auto& c : circles) out.free_circles.push_back(c);
  return out;
}

}  // namespace plink
