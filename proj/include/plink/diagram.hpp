#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace plink {

struct parse_error : std::runtime_error {
  int line;
  parse_error(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// One crossing of the diagram. Slots are listed in counterclockwise planar
/// rotation; slot 0 is the incoming under-strand, so the under-strand runs
/// slot0 -> slot2 and the over-strand occupies slots 1 and 3.
struct Crossing {
  std::string id;
  std::array<std::string, 4> slots;
  friend bool operator==(const Crossing&, const Crossing&) = default;
};

struct WallPassage {
  std::string arc;
  bool is_head = false;  // head: the arc terminates at this endpoint; tail: it begins here
  friend bool operator==(const WallPassage&, const WallPassage&) = default;
};

/// Disk-model diagram of a link in RP^3. Boundary endpoints are indexed
/// 0..2n-1 counterclockwise; endpoint i is identified with endpoint i+n.
struct ProjectiveDiagram {
  int boundary_count = 0;  // 2n
  std::vector<Crossing> crossings;
  std::vector<std::pair<int, WallPassage>> wall_passages;
  std::vector<std::string> free_circles;

  friend bool operator==(const ProjectiveDiagram&, const ProjectiveDiagram&) = default;

  const WallPassage* passage_at(int endpoint) const {
    for (const auto& [e, p] : wall_passages)
      if (e == endpoint) return &p;
    return nullptr;
  }
};

struct LinkComponent {
  std::string id;
  std::vector<std::string> cycle;  // arcs in orientation order; empty for a free circle
  int wall_passage_count = 0;
  bool is_free_circle = false;
};

struct ValidationError {
  std::string code;
  std::string message;
};

struct ValidationReport {
  bool ok = false;
  int euler_characteristic = 0;
  std::vector<ValidationError> errors;
};

// ---------------------------------------------------------------------------
// Textual format (.pld)
// ---------------------------------------------------------------------------

inline ProjectiveDiagram parse_diagram(const std::string& text) {
  ProjectiveDiagram d;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool saw_boundary = false;
  std::map<std::string, int> arc_uses;
  std::set<int> endpoints_seen;
  std::set<std::string> crossing_ids, circle_ids;

  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;

    auto expect_end = [&] {
      std::string extra;
      if (ls >> extra) throw parse_error(lineno, "trailing tokens after '" + kw + "' directive");
    };

    if (kw == "boundary") {
      int b;
      if (!(ls >> b)) throw parse_error(lineno, "boundary: expected an integer");
      if (saw_boundary) throw parse_error(lineno, "duplicate boundary directive");
      if (b < 0 || b % 2 != 0) throw parse_error(lineno, "boundary count must be even and non-negative");
      d.boundary_count = b;
      saw_boundary = true;
      expect_end();
    } else if (kw == "cross") {
      Crossing c;
      if (!(ls >> c.id >> c.slots[0] >> c.slots[1] >> c.slots[2] >> c.slots[3]))
        throw parse_error(lineno, "cross: expected <id> <s0> <s1> <s2> <s3>");
      if (!crossing_ids.insert(c.id).second)
        throw parse_error(lineno, "duplicate crossing id '" + c.id + "'");
      for (const auto& a : c.slots) ++arc_uses[a];
      d.crossings.push_back(std::move(c));
      expect_end();
    } else if (kw == "wall") {
      int e;
      std::string role, arc;
      if (!(ls >> e >> role >> arc)) throw parse_error(lineno, "wall: expected <endpoint> <head|tail> <arc>");
      if (role != "head" && role != "tail") throw parse_error(lineno, "wall role must be 'head' or 'tail'");
      if (!endpoints_seen.insert(e).second)
        throw parse_error(lineno, "duplicate endpoint " + std::to_string(e));
      ++arc_uses[arc];
      d.wall_passages.emplace_back(e, WallPassage{arc, role == "head"});
      expect_end();
    } else if (kw == "circle") {
      std::string id;
      if (!(ls >> id)) throw parse_error(lineno, "circle: expected <id>");
      if (!circle_ids.insert(id).second) throw parse_error(lineno, "duplicate circle id '" + id + "'");
      d.free_circles.push_back(id);
      expect_end();
    } else {
      throw parse_error(lineno, "unknown directive '" + kw + "'");
    }
  }
  for (const auto& [arc, uses] : arc_uses)
    if (uses != 2)
      throw parse_error(lineno, "arc '" + arc + "' used " + std::to_string(uses) + " times (expected 2)");
  std::sort(d.wall_passages.begin(), d.wall_passages.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return d;
}

inline std::string serialize(const ProjectiveDiagram& d) {
  std::ostringstream os;
  os << "boundary " << d.boundary_count << "\n";
  for (const auto& c : d.crossings)
    os << "cross " << c.id << " " << c.slots[0] << " " << c.slots[1] << " " << c.slots[2] << " "
       << c.slots[3] << "\n";
  auto walls = d.wall_passages;
  std::sort(walls.begin(), walls.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [e, p] : walls)
    os << "wall " << e << " " << (p.is_head ? "head" : "tail") << " " << p.arc << "\n";
  for (const auto& id : d.free_circles) os << "circle " << id << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Analysis: arc orientation resolution, components, face-traced map
// ---------------------------------------------------------------------------

// Occurrence positions. Crossing slot (ci, s) encodes as 4*ci + s >= 0;
// wall endpoint e encodes as -1-e < 0.
inline int slot_position(int ci, int s) { return 4 * ci + s; }
inline int wall_position(int e) { return -1 - e; }
inline bool is_wall_position(int p) { return p < 0; }
inline int position_endpoint(int p) { return -1 - p; }
inline int position_crossing(int p) { return p / 4; }
inline int position_slot(int p) { return p % 4; }

struct DiagramAnalysis {
  ValidationReport report;

  std::vector<std::string> arcs;  // sorted arc labels
  std::map<std::string, int> arc_index;
  std::vector<int> arc_start;  // position where the arc begins
  std::vector<int> arc_end;    // position where the arc terminates

  std::vector<int> over_in_slot;   // per crossing: 1 or 3
  std::vector<int> crossing_sign;  // +1 iff the over-strand runs slot3 -> slot1

  std::vector<LinkComponent> components;
  std::vector<int> arc_component;  // arc index -> component index

  // Face-traced combinatorial map. Each face is a cyclic dart sequence.
  struct FaceEdge {
    bool is_boundary = false;
    int index = 0;  // arc index, or boundary edge index i (edge between endpoints i, i+1)
  };
  std::vector<std::vector<FaceEdge>> faces;

  int sign_of(const std::string& crossing_id, const std::vector<Crossing>& cs) const {
    for (size_t i = 0; i < cs.size(); ++i)
      if (cs[i].id == crossing_id) return crossing_sign[i];
    throw std::out_of_range("unknown crossing '" + crossing_id + "'");
  }

  /// Arc following the given arc along its component.
  int next_arc(const ProjectiveDiagram& d, int arc) const {
    int p = arc_end[arc];
    if (is_wall_position(p)) {
      int n = d.boundary_count / 2;
      int cont = (position_endpoint(p) + n) % d.boundary_count;
      const WallPassage* w = d.passage_at(cont);
      return arc_index.at(w->arc);
    }
    int ci = position_crossing(p), s = position_slot(p);
    int out = (s == 0) ? 2 : (s == 1 ? 3 : 1);  // under-in -> under-out, over-in -> over-out
    return arc_index.at(d.crossings[ci].slots[out]);
  }
};

namespace detail {

inline void add_error(ValidationReport& r, const std::string& code, const std::string& msg) {
  r.errors.push_back({code, msg});
}

}  // namespace detail

inline DiagramAnalysis analyze(const ProjectiveDiagram& d) {
  DiagramAnalysis a;
  ValidationReport& rep = a.report;
  const int bc = d.boundary_count;
  const int n = bc / 2;

  // --- structural checks -------------------------------------------------
  if (bc < 0 || bc % 2 != 0) detail::add_error(rep, "ODD_BOUNDARY", "boundary count must be even");

  std::set<int> seen_endpoints;
  for (const auto& [e, p] : d.wall_passages) {
    if (e < 0 || e >= bc)
      detail::add_error(rep, "ENDPOINT_RANGE", "endpoint " + std::to_string(e) + " out of range");
    else if (!seen_endpoints.insert(e).second)
      detail::add_error(rep, "DUPLICATE_ENDPOINT", "endpoint " + std::to_string(e) + " declared twice");
  }
  for (int e = 0; e < bc; ++e)
    if (!seen_endpoints.count(e))
      detail::add_error(rep, "UNUSED_ENDPOINT", "endpoint " + std::to_string(e) + " carries no passage");

  {
    std::set<std::string> ids;
    for (const auto& c : d.crossings)
      if (!ids.insert(c.id).second)
        detail::add_error(rep, "DUPLICATE_CROSSING", "crossing id '" + c.id + "' reused");
    std::set<std::string> cids;
    for (const auto& f : d.free_circles)
      if (!cids.insert(f).second)
        detail::add_error(rep, "DUPLICATE_CIRCLE", "circle id '" + f + "' reused");
  }

  if (rep.errors.empty()) {
    for (const auto& [e, p] : d.wall_passages) {
      const WallPassage* q = d.passage_at((e + n) % std::max(bc, 1));
      if (!q || q->is_head == p.is_head)
        detail::add_error(rep, "CONTINUATION_MISMATCH",
                          "endpoint " + std::to_string(e) + " lacks an opposite-role antipode");
    }
  }

  // --- arc occurrences ----------------------------------------------------
  std::map<std::string, std::vector<int>> occ;
  for (size_t ci = 0; ci < d.crossings.size(); ++ci)
    for (int s = 0; s < 4; ++s) occ[d.crossings[ci].slots[s]].push_back(slot_position((int)ci, s));
  for (const auto& [e, p] : d.wall_passages) occ[p.arc].push_back(wall_position(e));

  for (const auto& [arc, ps] : occ)
    if (ps.size() != 2)
      detail::add_error(rep, "ARC_MULTIPLICITY",
                        "arc '" + arc + "' occurs " + std::to_string(ps.size()) + " times");

  if (!rep.errors.empty()) return a;

  for (const auto& [arc, ps] : occ) {
    a.arc_index[arc] = (int)a.arcs.size();
    a.arcs.push_back(arc);
  }
  const int narcs = (int)a.arcs.size();
  a.arc_start.assign(narcs, 0);
  a.arc_end.assign(narcs, 0);

  // --- resolve which of slots 1/3 is the over-in --------------------------
  // A position is an "end" if the arc terminates there: slot0 and wall heads
  // are ends, slot2 and wall tails are starts. For the over slots this
  // depends on one boolean per crossing: v=0 means slot1 is the over-in.
  // Each arc must have exactly one start and one end, which yields a parity
  // constraint graph over the per-crossing booleans.
  const int ncross = (int)d.crossings.size();
  std::vector<int> v(ncross, -1);  // -1 unknown

  // end_bit(pos) = 1 if position is an arc end. For slot1: 1-v, slot3: v.
  auto fixed_end_bit = [&](int p) -> std::optional<int> {
    if (is_wall_position(p)) {
      const WallPassage* w = d.passage_at(position_endpoint(p));
      return w->is_head ? 1 : 0;
    }
    int s = position_slot(p);
    if (s == 0) return 1;
    if (s == 2) return 0;
    return std::nullopt;
  };

  struct Constraint {
    int cross_a, pol_a;  // end_bit = pol_a ^ v[cross_a]
    int cross_b, pol_b;  // -1 cross means fixed bit in pol
  };
  std::vector<Constraint> cons;
  for (const auto& [arc, ps] : occ) {
    Constraint c{};
    auto fill = [&](int p, int& cr, int& pol) {
      if (auto f = fixed_end_bit(p)) {
        cr = -1;
        pol = *f;
      } else {
        cr = position_crossing(p);
        pol = (position_slot(p) == 1) ? 1 : 0;  // slot1: end iff v==0 -> bit = 1 ^ v
      }
    };
    fill(ps[0], c.cross_a, c.pol_a);
    fill(ps[1], c.cross_b, c.pol_b);
    cons.push_back(c);
  }

  // Propagate until fixed point; then ground remaining free crossings.
  bool contradiction = false;
  auto bit_of = [&](int cr, int pol) -> int {
    if (cr < 0) return pol;
    if (v[cr] < 0) return -1;
    return pol ^ v[cr];
  };
  bool progressed = true;
  int grounded = 0;
  while (!contradiction) {
    progressed = false;
    for (const auto& c : cons) {
      int ba = bit_of(c.cross_a, c.pol_a), bb = bit_of(c.cross_b, c.pol_b);
      if (ba >= 0 && bb >= 0) {
        if (ba + bb != 1) contradiction = true;
      } else if (ba >= 0 && c.cross_b >= 0) {
        v[c.cross_b] = (1 - ba) ^ c.pol_b;
        progressed = true;
      } else if (bb >= 0 && c.cross_a >= 0) {
        v[c.cross_a] = (1 - bb) ^ c.pol_a;
        progressed = true;
      }
    }
    if (contradiction || progressed) continue;
    while (grounded < ncross && v[grounded] >= 0) ++grounded;
    if (grounded == ncross) break;
    v[grounded] = 0;  // orientation of a never-under component: fix deterministically
  }
  if (contradiction) {
    detail::add_error(rep, "ARC_ORIENTATION", "no consistent strand orientation exists");
    return a;
  }

  a.over_in_slot.resize(ncross);
  a.crossing_sign.resize(ncross);
  for (int ci = 0; ci < ncross; ++ci) {
    a.over_in_slot[ci] = (v[ci] == 0) ? 1 : 3;
    a.crossing_sign[ci] = (v[ci] == 0) ? -1 : 1;
  }

  for (const auto& [arc, ps] : occ) {
    int idx = a.arc_index[arc];
    auto end_bit = [&](int p) {
      if (auto f = fixed_end_bit(p)) return *f;
      int pol = (position_slot(p) == 1) ? 1 : 0;
      return pol ^ v[position_crossing(p)];
    };
    int b0 = end_bit(ps[0]);
    a.arc_end[idx] = b0 ? ps[0] : ps[1];
    a.arc_start[idx] = b0 ? ps[1] : ps[0];
  }

  // --- components ----------------------------------------------------------
  a.arc_component.assign(narcs, -1);
  for (int start = 0; start < narcs; ++start) {
    if (a.arc_component[start] >= 0) continue;
    LinkComponent comp;
    int cur = start;
    while (a.arc_component[cur] < 0) {
      a.arc_component[cur] = (int)a.components.size();
      comp.cycle.push_back(a.arcs[cur]);
      if (is_wall_position(a.arc_end[cur])) ++comp.wall_passage_count;
      cur = a.next_arc(d, cur);
    }
    if (cur != start) {
      detail::add_error(rep, "NONCLOSED_COMPONENT", "component through '" + a.arcs[start] + "' fails to close");
      return a;
    }
    comp.id = *std::min_element(comp.cycle.begin(), comp.cycle.end());
    a.components.push_back(std::move(comp));
  }
  for (const auto& f : d.free_circles) {
    LinkComponent comp;
    comp.id = f;
    comp.is_free_circle = true;
    a.components.push_back(std::move(comp));
  }

  // --- face-traced map ------------------------------------------------------
  // Vertices: crossings (degree 4, rotation = slot order) and boundary
  // endpoints (degree 3: next-boundary edge, the strand, previous-boundary
  // edge, counterclockwise). Faces are orbits of sigma(theta(dart)).
  struct Edge {
    bool is_boundary;
    int index;
    int pos0, pos1;  // attachment positions; boundary edges use pseudo slots
  };
  std::vector<Edge> edges;
  for (int i = 0; i < narcs; ++i)
    edges.push_back({false, i, a.arc_start[i], a.arc_end[i]});
  const int nbedges = bc;  // boundary edge i joins endpoints i and i+1
  for (int i = 0; i < nbedges; ++i) edges.push_back({true, i, 0, 0});

  const int ndarts = 2 * (int)edges.size();
  auto theta = [](int dart) { return dart ^ 1; };

  // Gather darts at each vertex in rotation order.
  // Crossing ci -> rotation [slot0..slot3]; endpoint e -> [toNext, strand, toPrev].
  std::map<int, int> dart_at_position;  // occurrence position -> dart
  for (int ei = 0; ei < narcs; ++ei) {
    dart_at_position[edges[ei].pos0] = 2 * ei;
    dart_at_position[edges[ei].pos1] = 2 * ei + 1;
  }
  std::vector<int> sigma(ndarts, -1);
  std::vector<int> vertex_of(ndarts, -1);
  int vcount = 0;
  for (int ci = 0; ci < ncross; ++ci) {
    int vs = vcount++;
    std::array<int, 4> ring{};
    for (int s = 0; s < 4; ++s) ring[s] = dart_at_position.at(slot_position(ci, s));
    for (int s = 0; s < 4; ++s) {
      sigma[ring[s]] = ring[(s + 1) % 4];
      vertex_of[ring[s]] = vs;
    }
  }
  for (int e = 0; e < bc; ++e) {
    int vs = vcount++;
    int to_next = 2 * (narcs + e);
    int to_prev = 2 * (narcs + ((e - 1 + bc) % bc)) + 1;
    int strand = dart_at_position.at(wall_position(e));
    sigma[to_next] = strand;
    sigma[strand] = to_prev;
    sigma[to_prev] = to_next;
    vertex_of[to_next] = vertex_of[to_prev] = vertex_of[strand] = vs;
  }

  std::vector<char> visited(ndarts, 0);
  int nfaces = 0;
  for (int d0 = 0; d0 < ndarts; ++d0) {
    if (visited[d0]) continue;
    ++nfaces;
    std::vector<DiagramAnalysis::FaceEdge> face;
    int cur = d0;
    do {
      visited[cur] = 1;
      const Edge& e = edges[cur / 2];
      face.push_back({e.is_boundary, e.index});
      cur = sigma[theta(cur)];
    } while (cur != d0);
    a.faces.push_back(std::move(face));
  }

  // Connected components of the map (free circles are not part of it).
  int ncomp_map = 0;
  {
    std::vector<int> parent(vcount);
    for (int i = 0; i < vcount; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (size_t ei = 0; ei < edges.size(); ++ei) {
      int u = vertex_of[2 * (int)ei], w = vertex_of[2 * (int)ei + 1];
      parent[find(u)] = find(w);
    }
    std::set<int> roots;
    for (int i = 0; i < vcount; ++i) roots.insert(find(i));
    ncomp_map = (int)roots.size();
  }

  if (vcount == 0) {
    rep.euler_characteristic = 2;  // empty map: convention for a crossing- and wall-free diagram
  } else {
    rep.euler_characteristic = vcount - (int)edges.size() + nfaces - 2 * (ncomp_map - 1);
  }
  if (rep.euler_characteristic != 2)
    detail::add_error(rep, "EULER_CHARACTERISTIC",
                      "traced map has normalized Euler characteristic " +
                          std::to_string(rep.euler_characteristic));

  rep.ok = rep.errors.empty();
  return a;
}

inline ValidationReport validate(const ProjectiveDiagram& d) { return analyze(d).report; }

inline std::vector<LinkComponent> component_decomposition(const ProjectiveDiagram& d) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("component_decomposition: diagram fails validation");
  return a.components;
}

}  // namespace plink
