#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plink/diagram.hpp"

namespace plink {

// ---------------------------------------------------------------------------
// Words and presentations
// ---------------------------------------------------------------------------

/// Letters are +-(generator index + 1); words are kept freely reduced.
struct Word {
  std::vector<int> letters;
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;
};

inline Word free_reduce(const Word& w) {
  Word r;
  for (int x : w.letters) {
    if (!r.letters.empty() && r.letters.back() == -x)
      r.letters.pop_back();
    else
      r.letters.push_back(x);
  }
  return r;
}

inline Word inverse(const Word& w) {
  Word r;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back(-*it);
  return r;
}

inline Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
  return free_reduce(r);
}

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  int generator_index(const std::string& name) const {
    for (size_t i = 0; i < generators.size(); ++i)
      if (generators[i] == name) return (int)i;
    throw std::out_of_range("unknown generator '" + name + "'");
  }

  std::string word_to_string(const Word& w) const {
    if (w.letters.empty()) return "1";
    std::string s;
    for (int x : w.letters) {
      if (!s.empty()) s += " ";
      s += generators[std::abs(x) - 1];
      if (x < 0) s += "^-1";
    }
    return s;
  }
};

// ---------------------------------------------------------------------------
// Presentation of the diagram's complement
// ---------------------------------------------------------------------------

/// Meridian generators, one per strand (arcs merged across over-passages) and
/// one per free circle, plus the wall generator h (always the last one).
///
/// Relators:
///   (i)   per crossing: u_out = o^s u_in o^-s with s the crossing sign;
///   (ii)  per antipodal pair i < n:
///         s(i+n) = V(i+n)^-1 h s(i) h^-1 V(i+n),
///         where s(k) is the meridian of the strand at endpoint k and
///         V(k) = prod_{j<k} s(j)^(+1 if head at j else -1);
///   (iii) h^2 = V(n).
/// The V-prefixes route every wall meridian through the common base gap
/// before endpoint 0; without them the presentation is wrong (it enlarges
/// the group already for the two-passage unknot).
inline GroupPresentation fundamental_group_presentation(const ProjectiveDiagram& d) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok)
    throw std::invalid_argument("fundamental_group_presentation: diagram fails validation");
  const int n = d.boundary_count / 2;
  const int narcs = (int)a.arcs.size();

  // Strands: merge arcs across the over slots of every crossing.
  std::vector<int> parent(narcs);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    int oin = a.over_in_slot[ci], oout = (oin == 1) ? 3 : 1;
    int u = a.arc_index.at(d.crossings[ci].slots[oin]);
    int v = a.arc_index.at(d.crossings[ci].slots[oout]);
    parent[std::max(find(u), find(v))] = std::min(find(u), find(v));
  }
  // Strand label = smallest member arc label.
  std::map<int, std::string> strand_label;
  for (int i = 0; i < narcs; ++i) {
    int r = find(i);
    auto it = strand_label.find(r);
    if (it == strand_label.end() || a.arcs[i] < it->second) strand_label[r] = a.arcs[i];
  }

  GroupPresentation p;
  std::map<int, int> strand_gen;  // strand root -> generator index
  {
    std::vector<std::pair<std::string, int>> ordered;
    for (const auto& [root, label] : strand_label) ordered.emplace_back(label, root);
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [label, root] : ordered) {
      strand_gen[root] = (int)p.generators.size();
      p.generators.push_back("x_" + label);
    }
  }
  for (const auto& c : d.free_circles) p.generators.push_back("x_" + c);
  const int h = (int)p.generators.size();
  p.generators.push_back("h");

  auto gen_of_arc = [&](const std::string& arc) { return strand_gen.at(find(a.arc_index.at(arc))); };
  auto lit = [](int gen, int e) { return e > 0 ? gen + 1 : -(gen + 1); };

  // (i) Wirtinger relators.
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    const Crossing& c = d.crossings[ci];
    int oin = a.over_in_slot[ci];
    int g_in = gen_of_arc(c.slots[0]);
    int g_out = gen_of_arc(c.slots[2]);
    int g_o = gen_of_arc(c.slots[oin]);
    int s = a.crossing_sign[ci];
    Word r;
    r.letters = {lit(g_out, -1), lit(g_o, s), lit(g_in, 1), lit(g_o, -s)};
    p.relators.push_back(free_reduce(r));
  }

  if (n > 0) {
    auto strand_at = [&](int e) { return gen_of_arc(d.passage_at(e)->arc); };
    auto eps_at = [&](int e) { return d.passage_at(e)->is_head ? 1 : -1; };
    auto V = [&](int k) {
      Word w;
      for (int j = 0; j < k; ++j) w.letters.push_back(lit(strand_at(j), eps_at(j)));
      return free_reduce(w);
    };
    // (ii) wall relators.
    for (int i = 0; i < n; ++i) {
      Word v = V(i + n);
      Word r;
      r.letters.push_back(lit(strand_at(i + n), -1));
      r = concat(r, inverse(v));
      r.letters.push_back(lit(h, 1));
      r.letters.push_back(lit(strand_at(i), 1));
      r.letters.push_back(lit(h, -1));
      r = concat(r, v);
      p.relators.push_back(free_reduce(r));
    }
    // (iii) global relator h^2 = V(n).
    Word r;
    r.letters = {lit(h, 1), lit(h, 1)};
    r = concat(r, inverse(V(n)));
    p.relators.push_back(free_reduce(r));
  } else {
    Word r;
    r.letters = {lit(h, 1), lit(h, 1)};
    p.relators.push_back(r);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Smith normal form and abelianization
// ---------------------------------------------------------------------------

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct SmithResult {
  IntMatrix d;  // U * A * V = d, diagonal with divisibility chain
  IntMatrix u;
  IntMatrix v;
  std::vector<std::int64_t> diagonal;  // nonzero-prefix convention: d_i | d_{i+1}
};

namespace detail {

inline IntMatrix identity_matrix(int k) {
  IntMatrix m(k, std::vector<std::int64_t>(k, 0));
  for (int i = 0; i < k; ++i) m[i][i] = 1;
  return m;
}

}  // namespace detail

inline SmithResult smith_normal_form(IntMatrix a) {
  const int rows = (int)a.size();
  const int cols = rows ? (int)a[0].size() : 0;
  SmithResult res;
  res.u = detail::identity_matrix(rows);
  res.v = detail::identity_matrix(cols);

  auto row_add = [&](int dst, int src, std::int64_t q) {  // row dst += q * row src
    for (int j = 0; j < cols; ++j) a[dst][j] += q * a[src][j];
    for (int j = 0; j < rows; ++j) res.u[dst][j] += q * res.u[src][j];
  };
  auto col_add = [&](int dst, int src, std::int64_t q) {
    for (int i = 0; i < rows; ++i) a[i][dst] += q * a[i][src];
    for (int i = 0; i < cols; ++i) res.v[i][dst] += q * res.v[i][src];
  };
  auto row_swap = [&](int i, int j) {
    std::swap(a[i], a[j]);
    std::swap(res.u[i], res.u[j]);
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
    for (int r = 0; r < cols; ++r) std::swap(res.v[r][i], res.v[r][j]);
  };
  auto row_negate = [&](int i) {
    for (int j = 0; j < cols; ++j) a[i][j] = -a[i][j];
    for (int j = 0; j < rows; ++j) res.u[i][j] = -res.u[i][j];
  };

  const int mn = std::min(rows, cols);
  for (int t = 0; t < mn; ++t) {
    // Pivot: smallest nonzero magnitude in the trailing submatrix.
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (a[i][j] != 0 &&
            (pi < 0 || std::abs(a[i][j]) < std::abs(a[pi][pj]))) { pi = i; pj = j; }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) {
          row_add(i, t, -(a[i][t] / a[t][t]));
          if (a[i][t] != 0) { row_swap(t, i); clean = false; }
        }
      for (int j = t + 1; j < cols; ++j)
        if (a[t][j] != 0) {
          col_add(j, t, -(a[t][j] / a[t][t]));
          if (a[t][j] != 0) { col_swap(t, j); clean = false; }
        }
      if (clean) {
        // Pivot must divide the whole trailing submatrix.
        for (int i = t + 1; i < rows && clean; ++i)
          for (int j = t + 1; j < cols && clean; ++j)
            if (a[i][j] % a[t][t] != 0) {
              row_add(t, i, 1);
              clean = false;
            }
      }
    }
    if (a[t][t] < 0) row_negate(t);
  }
  res.d = a;
  for (int t = 0; t < mn && a[t][t] != 0; ++t) res.diagonal.push_back(a[t][t]);
  return res;
}

struct AbelianInvariants {
  int rank = 0;
  std::vector<std::int64_t> torsion;  // entries > 1, in divisibility order
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

inline IntMatrix relator_matrix(const GroupPresentation& p) {
  IntMatrix m(p.relators.size(), std::vector<std::int64_t>(p.generators.size(), 0));
  for (size_t i = 0; i < p.relators.size(); ++i)
    for (int x : p.relators[i].letters) m[i][std::abs(x) - 1] += x > 0 ? 1 : -1;
  return m;
}

inline AbelianInvariants abelianization(const GroupPresentation& p) {
  if (p.generators.empty()) return {};
  SmithResult s = smith_normal_form(relator_matrix(p));
  AbelianInvariants out;
  out.rank = (int)p.generators.size() - (int)s.diagonal.size();
  for (auto d : s.diagonal)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

// ---------------------------------------------------------------------------
// Finite permutation quotients
// ---------------------------------------------------------------------------

using Permutation = std::vector<int>;

inline Permutation perm_identity(int degree) {
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline Permutation perm_compose(const Permutation& f, const Permutation& g) {  // f after g
  Permutation r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[g[i]];
  return r;
}

inline Permutation perm_inverse(const Permutation& f) {
  Permutation r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[f[i]] = (int)i;
  return r;
}

struct PermutationQuotient {
  int degree = 0;
  std::vector<Permutation> images;  // one per generator

  Permutation evaluate(const Word& w) const {
    Permutation r = perm_identity(degree);
    for (int x : w.letters) {
      const Permutation& g = images[std::abs(x) - 1];
      r = perm_compose(r, x > 0 ? g : perm_inverse(g));
    }
    return r;
  }
};

struct QuotientList {
  std::vector<PermutationQuotient> quotients;
  bool complete = true;
};

namespace detail {

inline void all_permutations(int degree, std::vector<Permutation>& out) {
  Permutation p = perm_identity(degree);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

/// Backtracking over generator images; relators are checked as soon as all
/// their generators are assigned. `accept` returns true to keep collecting,
/// false to stop the whole search.
template <typename Accept>
inline bool quotient_search(const GroupPresentation& p, int degree, long long max_nodes,
                            bool& complete, Accept accept) {
  std::vector<Permutation> pool;
  all_permutations(degree, pool);
  const int ngen = (int)p.generators.size();
  // relators ready once the max generator index assigned
  std::vector<std::vector<const Word*>> ready(ngen + 1);
  for (const auto& r : p.relators) {
    int hi = -1;
    for (int x : r.letters) hi = std::max(hi, std::abs(x) - 1);
    ready[hi + 1].push_back(&r);
  }
  PermutationQuotient q;
  q.degree = degree;
  q.images.resize(ngen);
  long long nodes = 0;
  Permutation id = perm_identity(degree);

  std::function<bool(int)> rec = [&](int g) -> bool {
    if (++nodes > max_nodes) {
      complete = false;
      return true;  // abort
    }
    for (const Word* r : ready[g])
      if (q.evaluate(*r) != id) return false;
    if (g == ngen) return !accept(q);
    for (const Permutation& cand : pool) {
      q.images[g] = cand;
      if (rec(g + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

inline std::string quotient_key(const PermutationQuotient& q) {
  std::string s;
  for (const auto& img : q.images)
    for (int v : img) s += (char)('a' + v);
  return s;
}

/// Canonical form under simultaneous conjugation.
inline std::string conjugation_key(const PermutationQuotient& q) {
  std::vector<Permutation> pool;
  all_permutations(q.degree, pool);
  std::string best;
  PermutationQuotient c = q;
  for (const Permutation& s : pool) {
    Permutation si = perm_inverse(s);
    for (size_t i = 0; i < q.images.size(); ++i)
      c.images[i] = perm_compose(perm_compose(s, q.images[i]), si);
    std::string key = quotient_key(c);
    if (best.empty() || key < best) best = key;
  }
  return best;
}

}  // namespace detail

/// All homomorphisms into the symmetric group of the given degree, one
/// representative per simultaneous-conjugation class.
inline QuotientList find_finite_quotients(const GroupPresentation& p, int max_degree,
                                          long long max_nodes = 2'000'000) {
  if (max_degree > 7) throw std::invalid_argument("find_finite_quotients: degree cap is 7");
  QuotientList out;
  std::set<std::string> seen;
  detail::quotient_search(p, max_degree, max_nodes, out.complete,
                          [&](const PermutationQuotient& q) {
                            if (seen.insert(detail::conjugation_key(q)).second)
                              out.quotients.push_back(q);
                            return true;
                          });
  return out;
}

// ---------------------------------------------------------------------------
// Order-2 witness search
// ---------------------------------------------------------------------------

/// One rewrite: inside the current (freely reduced) word, the subword u at
/// `position` is replaced by v^-1, where u v is `rotation` of relator
/// `relator` (inverted first if `inverted`) and |u| = `split`.
struct RelatorStep {
  int relator = 0;
  int rotation = 0;
  int split = 0;
  int position = 0;
  bool inverted = false;
};

struct Order2Certificate {
  Word witness;
  std::vector<RelatorStep> square_proof;
  PermutationQuotient nontriviality;
};

struct WitnessBudget {
  int max_word_len = 3;
  long long max_nodes = 200'000;   // rewrite-search states
  int max_degree = 5;              // permutation quotient cap
  long long quotient_nodes = 500'000;
};

namespace detail {

inline Word rotated_relator(const GroupPresentation& p, const RelatorStep& s) {
  Word r = p.relators[s.relator];
  if (s.inverted) r = inverse(r);
  std::rotate(r.letters.begin(), r.letters.begin() + s.rotation, r.letters.end());
  return r;
}

/// Apply one step; returns nothing if the step does not match.
inline std::optional<Word> apply_step(const GroupPresentation& p, const Word& w,
                                      const RelatorStep& s) {
  if (s.relator < 0 || s.relator >= (int)p.relators.size()) return std::nullopt;
  Word r = p.relators[s.relator];
  if (s.rotation < 0 || s.rotation >= (int)std::max<size_t>(r.letters.size(), 1))
    return std::nullopt;
  r = rotated_relator(p, s);
  if (s.split < 1 || s.split > (int)r.letters.size()) return std::nullopt;
  Word u, v;
  u.letters.assign(r.letters.begin(), r.letters.begin() + s.split);
  v.letters.assign(r.letters.begin() + s.split, r.letters.end());
  if (s.position < 0 || s.position + s.split > (int)w.letters.size()) return std::nullopt;
  for (int i = 0; i < s.split; ++i)
    if (w.letters[s.position + i] != u.letters[i]) return std::nullopt;
  Word out;
  out.letters.assign(w.letters.begin(), w.letters.begin() + s.position);
  Word vi = inverse(v);
  out.letters.insert(out.letters.end(), vi.letters.begin(), vi.letters.end());
  out.letters.insert(out.letters.end(), w.letters.begin() + s.position + s.split,
                     w.letters.end());
  return free_reduce(out);
}

/// Breadth-first search for a rewrite sequence taking `start` to the empty
/// word. Sound: every step preserves the group element.
inline std::optional<std::vector<RelatorStep>> reduce_to_empty(const GroupPresentation& p,
                                                               const Word& start,
                                                               long long max_nodes,
                                                               int max_len) {
  struct Node {
    Word w;
    int parent;
    RelatorStep step;
  };
  std::vector<Node> nodes;
  std::map<Word, int> seen;
  std::deque<int> queue;
  Word s0 = free_reduce(start);
  if (s0.letters.empty()) return std::vector<RelatorStep>{};
  nodes.push_back({s0, -1, {}});
  seen[s0] = 0;
  queue.push_back(0);
  long long budget = max_nodes;
  while (!queue.empty() && budget-- > 0) {
    int cur = queue.front();
    queue.pop_front();
    Word w = nodes[cur].w;
    for (int ri = 0; ri < (int)p.relators.size(); ++ri) {
      int rl = (int)p.relators[ri].letters.size();
      if (rl == 0) continue;
      for (int inv = 0; inv < 2; ++inv)
        for (int rot = 0; rot < rl; ++rot)
          for (int split = 1; split <= rl; ++split)
            for (int pos = 0; pos + split <= (int)w.letters.size(); ++pos) {
              RelatorStep st{ri, rot, split, pos, inv == 1};
              auto nw = apply_step(p, w, st);
              if (!nw) continue;
              if ((int)nw->letters.size() > max_len) continue;
              if (seen.count(*nw)) continue;
              int id = (int)nodes.size();
              nodes.push_back({*nw, cur, st});
              seen[*nw] = id;
              if (nw->letters.empty()) {
                std::vector<RelatorStep> path;
                for (int x = id; x > 0; x = nodes[x].parent) path.push_back(nodes[x].step);
                std::reverse(path.begin(), path.end());
                return path;
              }
              queue.push_back(id);
            }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Independent certificate verifier (separate code path from the searcher):
/// replays the square proof mechanically and checks the quotient image.
inline bool replay_order2_certificate(const GroupPresentation& p, const Order2Certificate& c) {
  Word sq = concat(c.witness, c.witness);
  for (const auto& step : c.square_proof) {
    auto next = detail::apply_step(p, sq, step);
    if (!next) return false;
    sq = *next;
  }
  if (!sq.letters.empty()) return false;
  if (c.witness.letters.empty()) return false;
  if ((int)c.nontriviality.images.size() != (int)p.generators.size()) return false;
  Permutation id = perm_identity(c.nontriviality.degree);
  for (const auto& r : p.relators)
    if (c.nontriviality.evaluate(r) != id) return false;
  return c.nontriviality.evaluate(c.witness) != id;
}

inline std::optional<Order2Certificate> find_order2_witness(const GroupPresentation& p,
                                                            const WitnessBudget& budget = {},
                                                            long long* words_tried = nullptr) {
  const int ngen = (int)p.generators.size();
  if (ngen == 0) return std::nullopt;

  // Candidate words in priority order: h, generators, h-translates g^k h,
  // conjugates u g u^-1 of length <= max_word_len, then all short words.
  std::vector<Word> candidates;
  std::set<Word> enqueued;
  auto push = [&](Word w) {
    w = free_reduce(w);
    if (w.letters.empty() || (int)w.letters.size() > budget.max_word_len) return;
    if (enqueued.insert(w).second) candidates.push_back(w);
  };
  push({{ngen}});  // h is last
  for (int g = 1; g <= ngen; ++g) {
    push({{g}});
    push({{-g}});
  }
  for (int g = 1; g < ngen; ++g) {
    push({{-g, ngen}});
    push({{g, ngen}});
    push({{ngen, -g}});
    push({{ngen, g}});
  }
  for (int u = 1; u <= ngen; ++u)
    for (int g = 1; g <= ngen; ++g) {
      if (u == g) continue;
      push({{u, g, -u}});
      push({{-u, g, u}});
    }
  // exhaustive up to length 3 (bounded by max_word_len)
  std::vector<Word> frontier{{}};
  for (int len = 1; len <= std::min(budget.max_word_len, 3); ++len) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (int g = 1; g <= ngen; ++g)
        for (int s : {1, -1}) {
          Word e = w;
          e.letters.push_back(s * g);
          e = free_reduce(e);
          if ((int)e.letters.size() == len) {
            next.push_back(e);
            push(e);
          }
        }
    frontier = std::move(next);
  }

  // Abelianization data for the order-dividing-2 filter.
  IntMatrix rt;  // transpose of relator matrix: generators x relators
  {
    IntMatrix m = relator_matrix(p);
    rt.assign(ngen, std::vector<std::int64_t>(m.size(), 0));
    for (size_t i = 0; i < m.size(); ++i)
      for (int j = 0; j < ngen; ++j) rt[j][i] = m[i][j];
  }
  SmithResult snf = smith_normal_form(rt);
  auto ab_coords = [&](const Word& w) {
    std::vector<std::int64_t> x(ngen, 0);
    for (int l : w.letters) x[std::abs(l) - 1] += l > 0 ? 1 : -1;
    // coordinates in the Smith basis: y = U x
    std::vector<std::int64_t> y(ngen, 0);
    for (int i = 0; i < ngen; ++i)
      for (int j = 0; j < ngen; ++j) y[i] += snf.u[i][j] * x[j];
    return y;
  };
  auto ab_order_divides_2 = [&](const std::vector<std::int64_t>& y) {
    for (int i = 0; i < ngen; ++i) {
      std::int64_t di = i < (int)snf.diagonal.size() ? snf.diagonal[i] : 0;
      if (di == 0) {
        if (y[i] != 0) return false;  // free coordinate must vanish
      } else if ((2 * y[i]) % di != 0) {
        return false;
      }
    }
    return true;
  };

  for (const Word& w : candidates) {
    if (words_tried) ++*words_tried;
    auto y = ab_coords(w);
    if (!ab_order_divides_2(y)) continue;

    // Nontriviality: a permutation quotient separating w from 1.
    std::optional<PermutationQuotient> phi;
    for (int deg = 2; deg <= budget.max_degree && !phi; ++deg) {
      bool complete = true;
      Permutation id = perm_identity(deg);
      detail::quotient_search(p, deg, budget.quotient_nodes, complete,
                              [&](const PermutationQuotient& q) {
                                Permutation img = q.evaluate(w);
                                if (img != id && perm_compose(img, img) == id) {
                                  phi = q;
                                  return false;  // stop search
                                }
                                return true;
                              });
    }
    if (!phi) continue;

    auto proof = detail::reduce_to_empty(p, concat(w, w), budget.max_nodes,
                                         2 * budget.max_word_len + 8);
    if (!proof) continue;

    Order2Certificate cert{w, *proof, *phi};
    if (replay_order2_certificate(p, cert)) return cert;
  }
  return std::nullopt;
}

}  // namespace plink
