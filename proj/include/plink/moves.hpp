#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "plink/diagram.hpp"
#include "plink/diagram_ops.hpp"

namespace plink {

/// Self-contained description of one move site; enough to re-locate the site
/// and apply the move deterministically.
struct MoveDescriptor {
  std::string kind;  // R1-, R2-, R3, R4, R5-, R1+, R2+, R5+
  std::vector<std::string> crossings;
  std::vector<std::string> arcs;
  std::vector<int> endpoints;
  int variant = 0;
  friend bool operator==(const MoveDescriptor&, const MoveDescriptor&) = default;
};

struct InsertionCaps {
  int per_kind = 6;  // at most this many R1+/R2+/R5+ sites listed per kind
};

namespace detail {

/// Dart-level combinatorial map of a valid diagram (same construction as the
/// validator, but keeping the face orbits explicit for site detection).
struct MoveContext {
  const ProjectiveDiagram& d;
  DiagramAnalysis a;
  // Edge e: arc (index < narcs) or boundary edge (index - narcs).
  int narcs = 0;
  std::vector<int> sigma;                 // dart -> next dart at same vertex (CCW)
  std::vector<std::vector<int>> faces;    // orbits of sigma(theta(dart))
  std::map<int, int> dart_at_pos;         // occurrence position -> dart

  explicit MoveContext(const ProjectiveDiagram& diagram) : d(diagram), a(analyze(diagram)) {
    if (!a.report.ok) throw std::invalid_argument("moves: diagram fails validation");
    narcs = (int)a.arcs.size();
    const int bc = d.boundary_count;
    const int nedges = narcs + bc;
    const int ndarts = 2 * nedges;
    for (int i = 0; i < narcs; ++i) {
      dart_at_pos[a.arc_start[i]] = 2 * i;
      dart_at_pos[a.arc_end[i]] = 2 * i + 1;
    }
    sigma.assign(ndarts, -1);
    for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
      std::array<int, 4> ring{};
      for (int s = 0; s < 4; ++s) ring[s] = dart_at_pos.at(slot_position((int)ci, s));
      for (int s = 0; s < 4; ++s) sigma[ring[s]] = ring[(s + 1) % 4];
    }
    for (int e = 0; e < bc; ++e) {
      int to_next = 2 * (narcs + e);
      int to_prev = 2 * (narcs + ((e - 1 + bc) % bc)) + 1;
      int strand = dart_at_pos.at(wall_position(e));
      sigma[to_next] = strand;
      sigma[strand] = to_prev;
      sigma[to_prev] = to_next;
    }
    std::vector<char> seen(ndarts, 0);
    for (int d0 = 0; d0 < ndarts; ++d0) {
      if (seen[d0]) continue;
      std::vector<int> face;
      int cur = d0;
      do {
        seen[cur] = 1;
        face.push_back(cur);
        cur = sigma[cur ^ 1];
      } while (cur != d0);
      faces.push_back(std::move(face));
    }
  }

  bool dart_is_boundary(int dart) const { return dart / 2 >= narcs; }
  int dart_arc(int dart) const { return dart / 2; }
  int dart_bedge(int dart) const { return dart / 2 - narcs; }

  /// Occurrence position at which this arc dart is attached.
  int dart_pos(int dart) const {
    int arc = dart_arc(dart);
    return (dart & 1) ? a.arc_end[arc] : a.arc_start[arc];
  }

  /// Is the arc occurrence at this slot position on the over strand?
  bool slot_is_over(int pos) const {
    int s = position_slot(pos);
    return s == 1 || s == 3;
  }

  /// The in-slot (arc ends there) of the strand through slot position `pos`.
  int strand_in_pos(int ci, int slot) const {
    int cand1 = slot_position(ci, slot), cand2 = slot_position(ci, (slot + 2) % 4);
    const std::string& arc1 = d.crossings[ci].slots[slot];
    return a.arc_end[a.arc_index.at(arc1)] == cand1 ? cand1 : cand2;
  }
};

inline std::string fresh_label(const std::set<std::string>& used, const std::string& hint) {
  if (!used.count(hint)) return hint;
  for (int i = 0;; ++i) {
    std::string c = hint + std::to_string(i);
    if (!used.count(c)) return c;
  }
}

inline std::set<std::string> used_labels(const ProjectiveDiagram& d) {
  std::set<std::string> u;
  for (const auto& c : d.crossings)
    for (const auto& s : c.slots) u.insert(s);
  for (const auto& [e, p] : d.wall_passages) u.insert(p.arc);
  for (const auto& c : d.free_circles) u.insert(c);
  return u;
}

/// Remove the given crossings, joining each strand straight through
/// (under-in to under-out, over-in to over-out). Shared helper of R1- / R2-.
inline ProjectiveDiagram remove_crossings_straight(const ProjectiveDiagram& d,
                                                   const DiagramAnalysis& a,
                                                   const std::set<std::string>& remove) {
  std::map<int, int> successor;  // arc -> arc continuing it through a removed crossing
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    if (!remove.count(d.crossings[ci].id)) continue;
    int oin = a.over_in_slot[ci], oout = (oin == 1) ? 3 : 1;
    successor[a.arc_index.at(d.crossings[ci].slots[0])] = a.arc_index.at(d.crossings[ci].slots[2]);
    successor[a.arc_index.at(d.crossings[ci].slots[oin])] =
        a.arc_index.at(d.crossings[ci].slots[oout]);
  }
  std::set<int> targets;
  for (const auto& [u, v] : successor) targets.insert(v);

  std::map<std::string, std::string> rename;
  std::vector<std::string> new_circles;
  std::vector<char> done(a.arcs.size(), 0);
  for (size_t u = 0; u < a.arcs.size(); ++u) {
    if (done[u] || targets.count((int)u)) continue;
    std::vector<int> chain{(int)u};
    int cur = (int)u;
    while (successor.count(cur)) {
      cur = successor[cur];
      chain.push_back(cur);
    }
    std::string label = a.arcs[chain[0]];
    for (int x : chain) label = std::min(label, a.arcs[x]);
    for (int x : chain) {
      rename[a.arcs[x]] = label;
      done[x] = 1;
    }
  }
  for (size_t u = 0; u < a.arcs.size(); ++u) {  // leftover pure cycles
    if (done[u]) continue;
    std::vector<int> cycle{(int)u};
    int cur = successor.at((int)u);
    while (cur != (int)u) {
      cycle.push_back(cur);
      cur = successor.at(cur);
    }
    std::string label = a.arcs[cycle[0]];
    for (int x : cycle) label = std::min(label, a.arcs[x]);
    for (int x : cycle) done[x] = 1;
    new_circles.push_back(label);
  }

  ProjectiveDiagram out;
  out.boundary_count = d.boundary_count;
  for (const auto& c : d.crossings) {
    if (remove.count(c.id)) continue;
    Crossing nc = c;
    for (auto& s : nc.slots) s = rename.at(s);
    out.crossings.push_back(std::move(nc));
  }
  for (const auto& [e, p] : d.wall_passages)
    out.wall_passages.emplace_back(e, WallPassage{rename.at(p.arc), p.is_head});
  out.free_circles = d.free_circles;
  for (auto& c : new_circles) out.free_circles.push_back(std::move(c));
  std::sort(out.free_circles.begin(), out.free_circles.end());
  return out;
}

inline ProjectiveDiagram apply_r4(const ProjectiveDiagram& d, const MoveContext& ctx,
                                  const MoveDescriptor& m);

}  // namespace detail

// ---------------------------------------------------------------------------
// Site detection
// ---------------------------------------------------------------------------

inline std::vector<MoveDescriptor> applicable_moves(const ProjectiveDiagram& d,
                                                    const InsertionCaps& caps = {}) {
  detail::MoveContext ctx(d);
  const DiagramAnalysis& a = ctx.a;
  std::vector<MoveDescriptor> out;
  const int bc = d.boundary_count;
  const int n = bc / 2;

  std::set<std::vector<int>> r5_seen;  // removed endpoint sets, for antipodal dedup

  for (const auto& face : ctx.faces) {
    // R1-: monogon.
    if (face.size() == 1 && !ctx.dart_is_boundary(face[0])) {
      int arc = ctx.dart_arc(face[0]);
      int ci = position_crossing(a.arc_start[arc]);
      out.push_back({"R1-", {d.crossings[ci].id}, {a.arcs[arc]}, {}, 0});
      continue;
    }
    // R2- and R5-: bigons.
    if (face.size() == 2) {
      bool b0 = ctx.dart_is_boundary(face[0]), b1 = ctx.dart_is_boundary(face[1]);
      if (!b0 && !b1) {
        int p = ctx.dart_arc(face[0]), q = ctx.dart_arc(face[1]);
        if (p == q) continue;
        int pc1 = position_crossing(a.arc_start[p]), pc2 = position_crossing(a.arc_end[p]);
        int qc1 = position_crossing(a.arc_start[q]), qc2 = position_crossing(a.arc_end[q]);
        if (is_wall_position(a.arc_start[p]) || is_wall_position(a.arc_end[p]) ||
            is_wall_position(a.arc_start[q]) || is_wall_position(a.arc_end[q]))
          continue;
        if (std::set<int>{pc1, pc2} != std::set<int>{qc1, qc2} || pc1 == pc2) continue;
        bool p_over = ctx.slot_is_over(a.arc_start[p]) && ctx.slot_is_over(a.arc_end[p]);
        bool p_under = !ctx.slot_is_over(a.arc_start[p]) && !ctx.slot_is_over(a.arc_end[p]);
        bool q_over = ctx.slot_is_over(a.arc_start[q]) && ctx.slot_is_over(a.arc_end[q]);
        bool q_under = !ctx.slot_is_over(a.arc_start[q]) && !ctx.slot_is_over(a.arc_end[q]);
        if ((p_over && q_under) || (p_under && q_over)) {
          std::vector<std::string> cs{d.crossings[pc1].id, d.crossings[pc2].id};
          std::sort(cs.begin(), cs.end());
          std::vector<std::string> arcs{a.arcs[p], a.arcs[q]};
          std::sort(arcs.begin(), arcs.end());
          out.push_back({"R2-", cs, arcs, {}, 0});
        }
      } else if (b0 != b1) {
        int bd = b0 ? face[0] : face[1];
        int ad = b0 ? face[1] : face[0];
        if (ctx.dart_is_boundary(ad)) continue;
        int arc = ctx.dart_arc(ad);
        int s = a.arc_start[arc], e = a.arc_end[arc];
        if (!is_wall_position(s) || !is_wall_position(e)) continue;
        int es = position_endpoint(s), ee = position_endpoint(e);
        // lambda must join adjacent endpoints j, j+1
        int j = -1;
        if ((es + 1) % bc == ee) j = es;
        if ((ee + 1) % bc == es) j = ee;
        if (j < 0) continue;
        (void)bd;
        std::vector<int> removed{j, (j + 1) % bc, (j + n) % bc, (j + n + 1) % bc};
        std::sort(removed.begin(), removed.end());
        if (removed[0] == removed[1]) continue;  // degenerate tiny boundary
        if (!r5_seen.insert(removed).second) continue;
        out.push_back({"R5-", {}, {a.arcs[arc]}, {j}, 0});
      }
      continue;
    }
    if (face.size() == 3) {
      int nb = 0;
      for (int dart : face) nb += ctx.dart_is_boundary(dart) ? 1 : 0;
      // R3: trigon of three arcs at three distinct crossings.
      if (nb == 0) {
        std::set<int> arcs, crossings;
        bool wall_touch = false;
        for (int dart : face) {
          int arc = ctx.dart_arc(dart);
          arcs.insert(arc);
          for (int pos : {a.arc_start[arc], a.arc_end[arc]}) {
            if (is_wall_position(pos))
              wall_touch = true;
            else
              crossings.insert(position_crossing(pos));
          }
          if (!is_wall_position(a.arc_start[arc]) && !is_wall_position(a.arc_end[arc]) &&
              position_crossing(a.arc_start[arc]) == position_crossing(a.arc_end[arc]))
            wall_touch = true;  // side arc looping at one crossing: not a trigon side
        }
        if (wall_touch || arcs.size() != 3 || crossings.size() != 3) continue;
        int oo = 0, uu = 0;
        for (int arc : arcs) {
          bool so = ctx.slot_is_over(a.arc_start[arc]), eo = ctx.slot_is_over(a.arc_end[arc]);
          if (so && eo) ++oo;
          if (!so && !eo) ++uu;
        }
        if (oo < 1 || uu < 1) continue;
        std::vector<std::string> cids, aids;
        for (int c : crossings) cids.push_back(d.crossings[c].id);
        for (int arc : arcs) aids.push_back(a.arcs[arc]);
        std::sort(cids.begin(), cids.end());
        std::sort(aids.begin(), aids.end());
        out.push_back({"R3", cids, aids, {}, 0});
        continue;
      }
      // R4: [arc alpha to endpoint i] [boundary edge i..i+1] [arc beta from i+1]
      // with alpha, beta meeting the same crossing at adjacent slots.
      if (nb == 1) {
        for (int rot = 0; rot < 3; ++rot) {
          int d0 = face[rot], d1 = face[(rot + 1) % 3], d2 = face[(rot + 2) % 3];
          if (!ctx.dart_is_boundary(d1) || ctx.dart_is_boundary(d0) || ctx.dart_is_boundary(d2))
            continue;
          int alpha = ctx.dart_arc(d0), beta = ctx.dart_arc(d2);
          if (alpha == beta || bc < 4) continue;
          int i = ctx.dart_bedge(d1);  // boundary edge between endpoints i, i+1
          // each of alpha, beta has one wall occurrence (at i or i+1) and one
          // crossing occurrence; both crossing occurrences at one crossing,
          // in adjacent slots.
          auto wall_of = [&](int arc) {
            if (is_wall_position(a.arc_start[arc])) return a.arc_start[arc];
            if (is_wall_position(a.arc_end[arc])) return a.arc_end[arc];
            return 1;  // invalid marker (positions are never +1 for walls)
          };
          auto slot_of = [&](int arc) {
            return is_wall_position(a.arc_start[arc]) ? a.arc_end[arc] : a.arc_start[arc];
          };
          int wa = wall_of(alpha), wb = wall_of(beta);
          if (wa == 1 || wb == 1) continue;
          if (is_wall_position(slot_of(alpha)) || is_wall_position(slot_of(beta))) continue;
          std::set<int> eps{position_endpoint(wa), position_endpoint(wb)};
          if (eps != std::set<int>{i, (i + 1) % bc}) continue;
          int ca = position_crossing(slot_of(alpha)), cb = position_crossing(slot_of(beta));
          if (ca != cb) continue;
          int sa = position_slot(slot_of(alpha)), sb = position_slot(slot_of(beta));
          if ((sa + 1) % 4 != sb && (sb + 1) % 4 != sa) continue;
          std::string aa = a.arcs[alpha], ab = a.arcs[beta];
          if (position_endpoint(wa) != i) std::swap(aa, ab);  // aa reaches endpoint i
          MoveDescriptor md{"R4", {d.crossings[ca].id}, {aa, ab}, {i}, 0};
          // Some triangle sites are obstructed: sliding the crossing across
          // the wall would force the two strands to intersect. Keep only
          // sites whose surgery yields a valid diagram.
          try {
            if (!validate(detail::apply_r4(d, ctx, md)).ok) continue;
          } catch (const std::exception&) {
            continue;
          }
          out.push_back(md);
        }
        continue;
      }
    }
  }

  // Insertions (capped).
  int count = 0;
  for (int arc = 0; arc < ctx.narcs && count < caps.per_kind; ++arc, ++count) {
    out.push_back({"R1+", {}, {a.arcs[arc]}, {}, +1});
    out.push_back({"R1+", {}, {a.arcs[arc]}, {}, -1});
  }
  count = 0;
  std::set<std::pair<int, int>> r2_pairs;
  for (const auto& face : ctx.faces) {
    for (size_t i = 0; i < face.size() && count < caps.per_kind; ++i)
      for (size_t j = i + 1; j < face.size() && count < caps.per_kind; ++j) {
        if (ctx.dart_is_boundary(face[i]) || ctx.dart_is_boundary(face[j])) continue;
        int x = ctx.dart_arc(face[i]), y = ctx.dart_arc(face[j]);
        if (x == y) continue;
        auto key = std::minmax(x, y);
        if (!r2_pairs.insert(key).second) continue;
        out.push_back({"R2+", {}, {a.arcs[x], a.arcs[y]}, {}, 0});
        out.push_back({"R2+", {}, {a.arcs[x], a.arcs[y]}, {}, 1});
        ++count;
      }
  }
  count = 0;
  if (bc == 0) {
    for (int arc = 0; arc < ctx.narcs && count < caps.per_kind; ++arc, ++count)
      out.push_back({"R5+", {}, {a.arcs[arc]}, {0}, 0});
  } else {
    std::set<std::pair<int, int>> r5_sites;
    for (const auto& face : ctx.faces)
      for (int di : face)
        if (ctx.dart_is_boundary(di))
          for (int dj : face)
            if (!ctx.dart_is_boundary(dj)) {
              if (count >= caps.per_kind) break;
              auto key = std::make_pair(ctx.dart_arc(dj), ctx.dart_bedge(di));
              if (!r5_sites.insert(key).second) continue;
              out.push_back({"R5+", {}, {a.arcs[ctx.dart_arc(dj)]}, {ctx.dart_bedge(di)}, 0});
              ++count;
            }
  }
  for (size_t i = 0; i < d.free_circles.size() && (int)i < caps.per_kind; ++i)
    out.push_back({"R5+", {}, {d.free_circles[i]}, {bc > 0 ? 0 : 0}, 1});

  return out;
}

// ---------------------------------------------------------------------------
// Application
// ---------------------------------------------------------------------------

namespace detail {

inline ProjectiveDiagram apply_r1_minus(const ProjectiveDiagram& d, const MoveContext& ctx,
                                        const MoveDescriptor& m) {
  return remove_crossings_straight(d, ctx.a, {m.crossings.at(0)});
}

inline ProjectiveDiagram apply_r2_minus(const ProjectiveDiagram& d, const MoveContext& ctx,
                                        const MoveDescriptor& m) {
  return remove_crossings_straight(d, ctx.a, {m.crossings.at(0), m.crossings.at(1)});
}

inline ProjectiveDiagram apply_r3(const ProjectiveDiagram& d, const MoveContext& ctx,
                                  const MoveDescriptor& m) {
  const DiagramAnalysis& a = ctx.a;
  ProjectiveDiagram out = d;
  // For each triangle side arc: swap the contents of its strand's in-slots
  // between the two crossings, and likewise the out-slots.
  for (const auto& arc_label : m.arcs) {
    int arc = a.arc_index.at(arc_label);
    int ps = a.arc_start[arc], pe = a.arc_end[arc];
    int cs = position_crossing(ps), ce = position_crossing(pe);
    int in_s = ctx.strand_in_pos(cs, position_slot(ps));
    int in_e = ctx.strand_in_pos(ce, position_slot(pe));
    int out_s = slot_position(cs, (position_slot(in_s) + 2) % 4);
    int out_e = slot_position(ce, (position_slot(in_e) + 2) % 4);
    std::swap(out.crossings[position_crossing(in_s)].slots[position_slot(in_s)],
              out.crossings[position_crossing(in_e)].slots[position_slot(in_e)]);
    std::swap(out.crossings[position_crossing(out_s)].slots[position_slot(out_s)],
              out.crossings[position_crossing(out_e)].slots[position_slot(out_e)]);
  }
  return out;
}

inline ProjectiveDiagram apply_r5_minus(const ProjectiveDiagram& d, const MoveContext& ctx,
                                        const MoveDescriptor& m) {
  const DiagramAnalysis& a = ctx.a;
  const int bc = d.boundary_count, n = bc / 2;
  const std::string& lam = m.arcs.at(0);
  int arc = a.arc_index.at(lam);
  int head_ep = position_endpoint(a.arc_end[arc]);
  int tail_ep = position_endpoint(a.arc_start[arc]);
  int mu_ep = (head_ep + n) % bc;   // tail of the continuation
  int nu_ep = (tail_ep + n) % bc;   // head of the continuation
  const std::string mu = d.passage_at(mu_ep)->arc;
  const std::string nu = d.passage_at(nu_ep)->arc;

  std::set<int> removed{head_ep, tail_ep, mu_ep, nu_ep};
  std::vector<int> kept;
  for (int e = 0; e < bc; ++e)
    if (!removed.count(e)) kept.push_back(e);
  auto new_index = [&](int e) {
    return (int)(std::lower_bound(kept.begin(), kept.end(), e) - kept.begin());
  };

  ProjectiveDiagram out;
  out.boundary_count = bc - 4;
  std::map<std::string, std::string> rename;
  std::string merged = std::min(mu, nu);
  if (mu != nu) {
    rename[mu] = merged;
    rename[nu] = merged;
  }
  auto rn = [&](const std::string& s) {
    auto it = rename.find(s);
    return it == rename.end() ? s : it->second;
  };
  for (const auto& c : d.crossings) {
    Crossing nc = c;
    for (auto& s : nc.slots) s = rn(s);
    out.crossings.push_back(std::move(nc));
  }
  for (const auto& [e, p] : d.wall_passages) {
    if (removed.count(e)) continue;
    out.wall_passages.emplace_back(new_index(e), WallPassage{rn(p.arc), p.is_head});
  }
  out.free_circles = d.free_circles;
  if (mu == nu) {
    // The continuation closes on itself: count its crossings; none -> circle.
    bool has_crossing = !is_wall_position(a.arc_start[a.arc_index.at(mu)]) ||
                        !is_wall_position(a.arc_end[a.arc_index.at(mu)]);
    if (!has_crossing) out.free_circles.push_back(mu);
    std::sort(out.free_circles.begin(), out.free_circles.end());
  }
  return out;
}

inline ProjectiveDiagram apply_r4(const ProjectiveDiagram& d, const MoveContext& ctx,
                                  const MoveDescriptor& m) {
  const DiagramAnalysis& a = ctx.a;
  const int bc = d.boundary_count, n = bc / 2;
  const int i = m.endpoints.at(0);
  const std::string& alpha = m.arcs.at(0);  // reaches endpoint i
  const std::string& beta = m.arcs.at(1);   // reaches endpoint i+1
  int ip = (i + 1) % bc;
  int ian = (i + n) % bc, ibn = (ip + n) % bc;

  auto crossing_index = [&](const std::string& id) {
    for (size_t c = 0; c < d.crossings.size(); ++c)
      if (d.crossings[c].id == id) return (int)c;
    throw std::invalid_argument("INAPPLICABLE: crossing vanished");
  };
  int ci = crossing_index(m.crossings.at(0));
  const Crossing& c = d.crossings[ci];

  int ja = -1, jb = -1;
  for (int s = 0; s < 4; ++s) {
    if (c.slots[s] == alpha && (a.arc_start[a.arc_index.at(alpha)] == slot_position(ci, s) ||
                                a.arc_end[a.arc_index.at(alpha)] == slot_position(ci, s)))
      ja = s;
    if (c.slots[s] == beta) jb = s;
  }
  if (ja < 0 || jb < 0) throw std::invalid_argument("INAPPLICABLE: R4 site mismatch");
  int jg = (ja + 2) % 4, jd = (jb + 2) % 4;
  std::string gamma = c.slots[jg], delta = c.slots[jd];

  // Strand A: gamma - c - alpha - wall i; beyond: arc at i+n.
  // Strand B: delta - c - beta - wall i+1; beyond: arc at i+n+1.
  std::string ta = d.passage_at(ian)->arc;   // A's continuation beyond the wall
  std::string tb = d.passage_at(ibn)->arc;   // B's continuation
  bool a_under = (ja == 0 || ja == 2);

  std::set<std::string> used = used_labels(d);
  std::string sa = fresh_label(used, "w");
  used.insert(sa);
  std::string sb = fresh_label(used, "w");
  used.insert(sb);

  ProjectiveDiagram out;
  out.boundary_count = bc;
  out.free_circles = d.free_circles;

  // Wall passages: endpoints i+n / i+n+1 now carry the stubs.
  for (const auto& [e, p] : d.wall_passages) {
    WallPassage np = p;
    if (e == ian) np.arc = sa;
    if (e == ibn) np.arc = sb;
    out.wall_passages.emplace_back(e, np);
  }

  // Remainders: the far parts of ta / tb keep their labels unless ta == tb,
  // in which case the middle piece between the two splits is fresh.
  std::string ra = ta, rb = tb, mid;
  if (ta == tb) {
    mid = fresh_label(used, "w");
    used.insert(mid);
    ra = mid;
    rb = mid;
  }

  // Old-side merge: remove c, join gamma+alpha and delta+beta.
  std::map<std::string, std::string> rename;
  auto add_merge = [&](const std::string& x, const std::string& y) {
    std::function<std::string(const std::string&)> find = [&](const std::string& s) {
      auto it = rename.find(s);
      return it == rename.end() ? s : find(it->second);
    };
    std::string rx = find(x), ry = find(y);
    if (rx != ry) rename[std::max(rx, ry)] = std::min(rx, ry);
  };
  add_merge(gamma, alpha);
  add_merge(delta, beta);
  auto rn = [&](const std::string& s) {
    std::string cur = s;
    auto it = rename.find(cur);
    while (it != rename.end()) {
      cur = it->second;
      it = rename.find(cur);
    }
    return cur;
  };

  for (size_t k = 0; k < d.crossings.size(); ++k) {
    if ((int)k == ci) continue;
    Crossing nc = d.crossings[k];
    for (auto& s : nc.slots) {
      // far-side split: the crossing occurrence of ta/tb becomes the remainder
      if (ta == tb && s == ta)
        s = mid;  // both crossing occurrences belong to the middle piece
      s = rn(s);
    }
    out.crossings.push_back(std::move(nc));
  }
  for (auto& [e, p] : out.wall_passages) p.arc = rn(p.arc);

  // New crossing beyond the wall, cyclic order (sa, sb, ra, rb).
  // Flow: if alpha ends at i (head), A comes back in from the wall stub.
  bool a_in_from_wall = d.passage_at(i)->is_head;
  bool b_in_from_wall = d.passage_at(ip)->is_head;
  std::array<std::string, 4> ring{sa, sb, rn(ra), rn(rb)};
  int s0;
  if (a_under)
    s0 = a_in_from_wall ? 0 : 2;  // under-in = sa or ra
  else
    s0 = b_in_from_wall ? 1 : 3;  // under-in = sb or rb
  Crossing nc;
  nc.id = fresh_label([&] {
    std::set<std::string> ids;
    for (const auto& cc : out.crossings) ids.insert(cc.id);
    return ids;
  }(), c.id);
  for (int s = 0; s < 4; ++s) nc.slots[s] = ring[(s0 + s) % 4];
  out.crossings.push_back(std::move(nc));
  (void)b_in_from_wall;
  return out;
}

inline ProjectiveDiagram apply_r1_plus(const ProjectiveDiagram& d, const MoveContext& ctx,
                                       const MoveDescriptor& m) {
  const std::string& x = m.arcs.at(0);
  ctx.a.arc_index.at(x);  // must exist
  std::set<std::string> used = used_labels(d);
  std::string x2 = fresh_label(used, x + "k");
  used.insert(x2);
  std::string l = fresh_label(used, x + "l");
  std::string cid = fresh_label([&] {
    std::set<std::string> ids;
    for (const auto& cc : d.crossings) ids.insert(cc.id);
    return ids;
  }(), "k");

  ProjectiveDiagram out = d;
  // The occurrence of x at its END moves to x2 (x keeps its start side).
  int pe = ctx.a.arc_end[ctx.a.arc_index.at(x)];
  if (is_wall_position(pe)) {
    for (auto& [e, p] : out.wall_passages)
      if (e == position_endpoint(pe)) p.arc = x2;
  } else {
    out.crossings[position_crossing(pe)].slots[position_slot(pe)] = x2;
  }
  Crossing c;
  c.id = cid;
  if (m.variant > 0)
    c.slots = {x, x2, l, l};  // positive kink
  else
    c.slots = {x, l, l, x2};  // negative kink
  out.crossings.push_back(std::move(c));
  return out;
}

inline ProjectiveDiagram apply_r5_plus(const ProjectiveDiagram& d, const MoveContext* ctx,
                                       const MoveDescriptor& m) {
  const int bc = d.boundary_count, n = bc / 2;
  const std::string& x = m.arcs.at(0);
  const bool circle_variant = m.variant == 1;
  const int k = m.endpoints.at(0);  // split happens in gap (k, k+1); 0 for bc==0

  ProjectiveDiagram out;
  std::set<std::string> used = detail::used_labels(d);
  std::string x2 = fresh_label(used, x + "s");
  used.insert(x2);
  std::string lam = fresh_label(used, x + "u");

  // New endpoint indices: p1,p2 inserted after k, q1,q2 after k+n.
  std::map<int, int> shift;  // old endpoint -> new endpoint
  int p1 = -1, p2 = -1, q1 = -1, q2 = -1, idx = 0;
  if (bc == 0) {
    p1 = 0; p2 = 1; q1 = 2; q2 = 3;
  } else {
    for (int e = 0; e < bc; ++e) {
      shift[e] = idx++;
      if (e == k) { p1 = idx++; p2 = idx++; }
      if (e == (k + n) % bc) { q1 = idx++; q2 = idx++; }
    }
  }
  const int nbc = bc + 4, nn = nbc / 2;
  if ((p1 + nn) % nbc != q1 || (p2 + nn) % nbc != q2)
    throw std::logic_error("R5+: endpoint pairing broken");

  out.boundary_count = nbc;
  for (const auto& [e, p] : d.wall_passages) out.wall_passages.emplace_back(shift.at(e), p);
  out.crossings = d.crossings;
  out.free_circles = d.free_circles;

  if (circle_variant) {
    auto it = std::find(out.free_circles.begin(), out.free_circles.end(), x);
    if (it == out.free_circles.end()) throw std::invalid_argument("INAPPLICABLE: circle vanished");
    out.free_circles.erase(it);
    // Circle becomes: arc x from p2 to p1, u-turn lam from q1 to q2.
    out.wall_passages.emplace_back(p1, WallPassage{x, true});
    out.wall_passages.emplace_back(p2, WallPassage{x, false});
    out.wall_passages.emplace_back(q1, WallPassage{lam, false});
    out.wall_passages.emplace_back(q2, WallPassage{lam, true});
    return out;
  }

  // Arc variant: x splits at the two new passages; the strand may meet them
  // in either boundary order, so try both and keep the planar one.
  int pe = ctx->a.arc_end[ctx->a.arc_index.at(x)];
  if (is_wall_position(pe)) {
    for (auto& [e, p] : out.wall_passages)
      if (e == shift.at(position_endpoint(pe)) && p.arc == x && p.is_head) p.arc = x2;
  } else {
    out.crossings[position_crossing(pe)].slots[position_slot(pe)] = x2;
  }
  for (bool flip : {false, true}) {
    ProjectiveDiagram cand = out;
    int hp = flip ? p2 : p1, tp = flip ? p1 : p2;  // x heads into hp, x2 leaves tp
    int tq = flip ? q2 : q1, hq = flip ? q1 : q2;  // lam runs tq -> hq
    cand.wall_passages.emplace_back(hp, WallPassage{x, true});
    cand.wall_passages.emplace_back(tq, WallPassage{lam, false});
    cand.wall_passages.emplace_back(hq, WallPassage{lam, true});
    cand.wall_passages.emplace_back(tp, WallPassage{x2, false});
    std::sort(cand.wall_passages.begin(), cand.wall_passages.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    if (validate(cand).ok) return cand;
  }
  throw std::invalid_argument("INAPPLICABLE: no planar finger at this site");
}

inline std::optional<ProjectiveDiagram> try_r2_plus_candidate(const ProjectiveDiagram& d,
                                                              const MoveContext& ctx,
                                                              const std::string& x,
                                                              const std::string& y, bool x_over,
                                                              bool y_first_c2, bool c1_positive) {
  std::set<std::string> used = used_labels(d);
  std::string mx = fresh_label(used, x + "m");
  used.insert(mx);
  std::string x2 = fresh_label(used, x + "t");
  used.insert(x2);
  std::string my = fresh_label(used, y + "m");
  used.insert(my);
  std::string y2 = fresh_label(used, y + "t");
  used.insert(y2);
  std::set<std::string> ids;
  for (const auto& cc : d.crossings) ids.insert(cc.id);
  std::string c1id = fresh_label(ids, "p");
  ids.insert(c1id);
  std::string c2id = fresh_label(ids, "p");

  ProjectiveDiagram out = d;
  auto move_end = [&](const std::string& arc, const std::string& repl) {
    int pe = ctx.a.arc_end[ctx.a.arc_index.at(arc)];
    if (is_wall_position(pe)) {
      for (auto& [e, p] : out.wall_passages)
        if (e == position_endpoint(pe) && p.arc == arc && p.is_head) p.arc = repl;
    } else {
      out.crossings[position_crossing(pe)].slots[position_slot(pe)] = repl;
    }
  };
  move_end(x, x2);
  move_end(y, y2);

  // x: x -> c1 -> mx -> c2 -> x2;  y passes c1 then c2, or c2 then c1.
  auto make = [&](const std::string& id, const std::string& uin, const std::string& uout,
                  const std::string& oin, const std::string& oout, bool positive) {
    Crossing c;
    c.id = id;
    if (positive)
      c.slots = {uin, oout, uout, oin};
    else
      c.slots = {uin, oin, uout, oout};
    return c;
  };
  std::string y_c1_in = y_first_c2 ? my : y;
  std::string y_c1_out = y_first_c2 ? y2 : my;
  std::string y_c2_in = y_first_c2 ? y : my;
  std::string y_c2_out = y_first_c2 ? my : y2;
  Crossing c1 = x_over ? make(c1id, y_c1_in, y_c1_out, x, mx, c1_positive)
                       : make(c1id, x, mx, y_c1_in, y_c1_out, c1_positive);
  Crossing c2 = x_over ? make(c2id, y_c2_in, y_c2_out, mx, x2, !c1_positive)
                       : make(c2id, mx, x2, y_c2_in, y_c2_out, !c1_positive);
  out.crossings.push_back(std::move(c1));
  out.crossings.push_back(std::move(c2));

  if (!validate(out).ok) return std::nullopt;
  // Round-trip: the inserted pair must be removable by R2- and give back d.
  for (const auto& mv : applicable_moves(out, InsertionCaps{0})) {
    if (mv.kind != "R2-") continue;
    std::vector<std::string> want{c1id, c2id};
    std::sort(want.begin(), want.end());
    if (mv.crossings != want) continue;
    MoveContext octx(out);
    ProjectiveDiagram back = apply_r2_minus(out, octx, mv);
    if (canonical_code(back) == canonical_code(d)) return out;
  }
  return std::nullopt;
}

inline ProjectiveDiagram apply_r2_plus(const ProjectiveDiagram& d, const MoveContext& ctx,
                                       const MoveDescriptor& m) {
  const std::string& x = m.arcs.at(0);
  const std::string& y = m.arcs.at(1);
  bool x_over = m.variant == 0;
  for (bool yf : {false, true})
    for (bool pos : {false, true}) {
      auto r = try_r2_plus_candidate(d, ctx, x, y, x_over, yf, pos);
      if (r) return *r;
    }
  throw std::invalid_argument("INAPPLICABLE: no valid R2+ embedding at this site");
}

}  // namespace detail

inline ProjectiveDiagram apply_move(const ProjectiveDiagram& d, const MoveDescriptor& m) {
  detail::MoveContext ctx(d);
  // The site must still exist (insertions are validated inside application).
  if (m.kind == "R1-" || m.kind == "R2-" || m.kind == "R3" || m.kind == "R4" ||
      m.kind == "R5-") {
    auto sites = applicable_moves(d, InsertionCaps{0});
    if (std::find(sites.begin(), sites.end(), m) == sites.end())
      throw std::invalid_argument("INAPPLICABLE: move site not present");
  }
  ProjectiveDiagram out;
  if (m.kind == "R1-")
    out = detail::apply_r1_minus(d, ctx, m);
  else if (m.kind == "R2-")
    out = detail::apply_r2_minus(d, ctx, m);
  else if (m.kind == "R3")
    out = detail::apply_r3(d, ctx, m);
  else if (m.kind == "R4")
    out = detail::apply_r4(d, ctx, m);
  else if (m.kind == "R5-")
    out = detail::apply_r5_minus(d, ctx, m);
  else if (m.kind == "R1+")
    out = detail::apply_r1_plus(d, ctx, m);
  else if (m.kind == "R2+")
    out = detail::apply_r2_plus(d, ctx, m);
  else if (m.kind == "R5+")
    out = detail::apply_r5_plus(d, &ctx, m);
  else
    throw std::invalid_argument("unknown move kind '" + m.kind + "'");
  std::sort(out.wall_passages.begin(), out.wall_passages.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  if (!validate(out).ok)
    throw std::logic_error("move application produced an invalid diagram (" + m.kind + ")");
  return out;
}

// ---------------------------------------------------------------------------
// Reduction search
// ---------------------------------------------------------------------------

struct ReductionCertificate {
  std::vector<MoveDescriptor> moves;
  ProjectiveDiagram final_diagram;
};

struct SearchBudget {
  int max_depth = 10;
  long long max_nodes = 3000;
};

/// Best-first search for a move sequence reaching a wall-free diagram.
/// Ordering prefers fewer wall passages, then fewer crossings, then depth.
inline std::optional<ReductionCertificate> search_affine_reduction(
    const ProjectiveDiagram& d, const SearchBudget& budget = {},
    long long* nodes_expanded = nullptr) {
  if (!validate(d).ok)
    throw std::invalid_argument("search_affine_reduction: diagram fails validation");

  struct Node {
    ProjectiveDiagram diagram;
    int parent = -1;
    MoveDescriptor via;
    int depth = 0;
  };
  std::vector<Node> nodes;
  std::set<std::string> seen;
  using Key = std::tuple<int, int, int, int>;  // boundary, crossings, depth, node id
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> open;

  auto push = [&](ProjectiveDiagram diag, int parent, const MoveDescriptor& via, int depth) {
    std::string code = canonical_code(diag);
    if (!seen.insert(code).second) return -1;
    int id = (int)nodes.size();
    nodes.push_back({std::move(diag), parent, via, depth});
    open.emplace(nodes[id].diagram.boundary_count, (int)nodes[id].diagram.crossings.size(), depth,
                 id);
    return id;
  };
  auto finish = [&](int id) {
    ReductionCertificate cert;
    cert.final_diagram = nodes[id].diagram;
    for (int x = id; x > 0; x = nodes[x].parent) cert.moves.push_back(nodes[x].via);
    std::reverse(cert.moves.begin(), cert.moves.end());
    return cert;
  };

  int root = push(d, -1, {}, 0);
  if (root >= 0 && nodes[root].diagram.boundary_count == 0) return finish(root);
  long long expanded = 0;
  while (!open.empty() && expanded < budget.max_nodes) {
    auto [b, c, depth, id] = open.top();
    open.pop();
    ++expanded;
    if (nodes_expanded) *nodes_expanded = expanded;
    if (depth >= budget.max_depth) continue;
    const ProjectiveDiagram cur = nodes[id].diagram;
    for (const auto& m : applicable_moves(cur, InsertionCaps{2})) {
      ProjectiveDiagram next;
      try {
        next = apply_move(cur, m);
      } catch (const std::exception&) {
        continue;
      }
      int nid = push(std::move(next), id, m, depth + 1);
      if (nid >= 0 && nodes[nid].diagram.boundary_count == 0) return finish(nid);
    }
  }
  return std::nullopt;
}

/// Independent replayer: applies the recorded moves and checks the endpoint.
inline bool replay_reduction(const ProjectiveDiagram& d, const ReductionCertificate& cert) {
  ProjectiveDiagram cur = d;
  try {
    for (const auto& m : cert.moves) {
      cur = apply_move(cur, m);
      if (!validate(cur).ok) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  return cur == cert.final_diagram && cur.boundary_count == 0;
}

}  // namespace plink
