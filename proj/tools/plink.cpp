// plink: command-line toolkit over the projective link diagram library.
//
// Subcommands: validate, components, invariants, lift, sl, group, simplify,
// replay, decide, fixtures. Every subcommand accepts --json. Exit codes:
// 0 success, 1 usage/IO error, 2 validation failure; decide uses 0 AFFINE,
// 3 NOT_AFFINE, 4 UNKNOWN.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "plink/covering.hpp"
#include "plink/diagram.hpp"
#include "plink/diagram_ops.hpp"
#include "plink/fixtures.hpp"
#include "plink/group.hpp"
#include "plink/invariants.hpp"
#include "plink/laurent.hpp"
#include "plink/moves.hpp"
#include "plink/verdict.hpp"

using json = nlohmann::ordered_json;
using namespace plink;

namespace {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ProjectiveDiagram load_diagram(const std::string& path) {
  try {
    return parse_diagram(read_file(path));
  } catch (const parse_error& e) {
    throw io_error(path + ": " + e.what());
  }
}

// A diagram that parses but fails structural validation: exit 2.
struct diagram_invalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ProjectiveDiagram load_valid_diagram(const std::string& path) {
  ProjectiveDiagram d = load_diagram(path);
  ValidationReport r = validate(d);
  if (!r.ok) {
    std::string msg = path + ": diagram fails validation";
    for (const auto& e : r.errors) msg += "\n  [" + e.code + "] " + e.message;
    throw diagram_invalid(msg);
  }
  return d;
}

json poly_json(const LaurentPolynomial& p) {
  json out = json::object();
  for (const auto& [e, c] : p.coefficients()) out[std::to_string(e)] = c;
  return out;
}

std::string poly_text(const LaurentPolynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest exponent first
  const auto& m = p.coefficients();
  for (auto it = m.rbegin(); it != m.rend(); ++it) {
    auto [e, c] = *it;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    std::int64_t a = c < 0 ? -c : c;
    if (a != 1 || e == 0) os << a;
    if (e != 0) {
      os << "A";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

json bracket_json(const BracketValue& b) {
  return json{{"poly", poly_json(b.poly)}, {"epsilon", b.epsilon}};
}

json validation_json(const ValidationReport& r) {
  json errs = json::array();
  for (const auto& e : r.errors) errs.push_back({{"code", e.code}, {"msg", e.message}});
  return json{{"ok", r.ok}, {"euler", r.euler_characteristic}, {"errors", errs}};
}

std::string word_display(const GroupPresentation& p, const Word& w) {
  if (w.letters.empty()) return "1";
  std::string out;
  for (int x : w.letters) {
    if (!out.empty()) out += " ";
    out += p.generators[std::abs(x) - 1];
    if (x < 0) out += "^-1";
  }
  return out;
}

json word_json(const GroupPresentation& p, const Word& w) {
  return json{{"letters", w.letters}, {"display", word_display(p, w)}};
}

json quotient_json(const PermutationQuotient& q) {
  return json{{"degree", q.degree}, {"images", q.images}};
}

json order2_json(const GroupPresentation& p, const Order2Certificate& c) {
  json steps = json::array();
  for (const auto& s : c.square_proof)
    steps.push_back({{"relator", s.relator},
                     {"rotation", s.rotation},
                     {"split", s.split},
                     {"position", s.position},
                     {"inverted", s.inverted}});
  return json{{"witness", word_json(p, c.witness)},
              {"square_proof", steps},
              {"nontriviality", quotient_json(c.nontriviality)}};
}

json move_json(const MoveDescriptor& m) {
  return json{{"kind", m.kind},
              {"crossings", m.crossings},
              {"arcs", m.arcs},
              {"endpoints", m.endpoints},
              {"variant", m.variant}};
}

MoveDescriptor move_from_json(const json& j) {
  MoveDescriptor m;
  m.kind = j.at("kind").get<std::string>();
  m.crossings = j.at("crossings").get<std::vector<std::string>>();
  m.arcs = j.at("arcs").get<std::vector<std::string>>();
  m.endpoints = j.at("endpoints").get<std::vector<int>>();
  m.variant = j.at("variant").get<int>();
  return m;
}

json reduction_json(const ReductionCertificate& c) {
  json moves = json::array();
  for (const auto& m : c.moves) moves.push_back(move_json(m));
  return json{{"moves", moves}, {"final_diagram", serialize(c.final_diagram)}};
}

ReductionCertificate reduction_from_json(const json& j) {
  ReductionCertificate c;
  for (const auto& m : j.at("moves")) c.moves.push_back(move_from_json(m));
  c.final_diagram = parse_diagram(j.at("final_diagram").get<std::string>());
  return c;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& file, bool as_json) {
  ProjectiveDiagram d = load_diagram(file);
  ValidationReport r = validate(d);
  if (as_json) {
    emit(validation_json(r));
  } else if (r.ok) {
    std::cout << "ok (euler " << r.euler_characteristic << ")\n";
  } else {
    std::cout << "invalid\n";
    for (const auto& e : r.errors) std::cout << "  [" << e.code << "] " << e.message << "\n";
  }
  return r.ok ? 0 : 2;
}

int cmd_components(const std::string& file, bool as_json) {
  ProjectiveDiagram d = load_valid_diagram(file);
  DiagramAnalysis a = analyze(d);
  if (as_json) {
    json out = validation_json(a.report);
    json cs = json::array();
    for (const auto& c : a.components)
      cs.push_back({{"id", c.id}, {"wall_passages", c.wall_passage_count}});
    out["components"] = cs;
    emit(out);
  } else {
    for (const auto& c : a.components)
      std::cout << c.id << ": " << c.wall_passage_count << " wall passage"
                << (c.wall_passage_count == 1 ? "" : "s")
                << (c.is_free_circle ? " (free circle)" : "") << "\n";
  }
  return 0;
}

int cmd_invariants(const std::string& file, bool as_json, bool per_component, int max_crossings) {
  if (max_crossings > 0) setenv("PLINK_MAX_CROSSINGS", std::to_string(max_crossings).c_str(), 1);
  ProjectiveDiagram d = load_valid_diagram(file);
  DiagramAnalysis a = analyze(d);

  json comps = json::array();
  for (const auto& c : a.components) {
    json jc{{"id", c.id}, {"h1_class", homology_class(c)}};
    if (per_component && !c.is_free_circle)
      jc["sl"] = self_linking(d, c.id).value;
    else
      jc["sl"] = nullptr;
    comps.push_back(jc);
  }
  int w = writhe(d);
  BracketValue br = drobotukhina_bracket(d);
  BracketValue v = jones_v(d);
  bool mod4 = mod4_exponents_congruent(v.poly);
  if (as_json) {
    emit(json{{"components", comps},
              {"writhe", w},
              {"bracket", bracket_json(br)},
              {"v", bracket_json(v)},
              {"mod4", mod4}});
  } else {
    for (const auto& jc : comps)
      std::cout << "component " << jc["id"].get<std::string>() << ": h1_class "
                << jc["h1_class"].get<int>()
                << (jc["sl"].is_null() ? "" : ", sl " + std::to_string(jc["sl"].get<int>()))
                << "\n";
    std::cout << "writhe " << w << "\n";
    std::cout << "bracket " << poly_text(br.poly) << "  (epsilon " << br.epsilon << ")\n";
    std::cout << "V " << poly_text(v.poly) << "  (epsilon " << v.epsilon << ")\n";
    std::cout << "mod4 " << (mod4 ? "pass" : "fail") << "\n";
  }
  return 0;
}

int cmd_lift(const std::string& file, bool as_json) {
  ProjectiveDiagram d = load_valid_diagram(file);
  ClassicalDiagram cd = lift_to_sphere(d);
  if (as_json) {
    json origin = json::object();
    for (const auto& [lifted, base] : cd.origin)
      origin[lifted] = json{{"base", base.first}, {"tag", base.second}};
    emit(json{{"diagram", serialize(cd.diagram)}, {"components", cd.components}, {"origin", origin}});
  } else {
    std::cout << serialize(cd.diagram);
    for (const auto& [lifted, base] : cd.origin)
      std::cout << "# origin " << lifted << " <- " << base.first << " (" << base.second << ")\n";
  }
  return 0;
}

int cmd_sl(const std::string& file, const std::string& component, bool as_json) {
  ProjectiveDiagram d = load_valid_diagram(file);
  SelfLinking sl = self_linking(d, component);
  if (as_json)
    emit(json{{"component", sl.component}, {"sl", sl.value}});
  else
    std::cout << "sl(" << sl.component << ") = " << sl.value << "\n";
  return 0;
}

int cmd_group(const std::string& file, bool as_json, bool abelian, int quotients,
              bool find_order2, int max_word_len, long long max_nodes) {
  ProjectiveDiagram d = load_valid_diagram(file);
  GroupPresentation p = fundamental_group_presentation(d);

  json out;
  out["generators"] = p.generators;
  json rels = json::array();
  for (const auto& r : p.relators) rels.push_back(word_json(p, r));
  out["relators"] = rels;

  if (!as_json) {
    std::cout << "generators:";
    for (const auto& g : p.generators) std::cout << " " << g;
    std::cout << "\nrelators:\n";
    for (const auto& r : p.relators) std::cout << "  " << word_display(p, r) << "\n";
  }

  if (abelian) {
    AbelianInvariants ab = abelianization(p);
    out["abelianization"] = json{{"rank", ab.rank}, {"torsion", ab.torsion}};
    if (!as_json) {
      std::cout << "abelianization: Z^" << ab.rank;
      for (auto t : ab.torsion) std::cout << " + Z/" << t;
      std::cout << "\n";
    }
  }
  if (quotients > 0) {
    QuotientList ql = find_finite_quotients(p, quotients, WitnessBudget{}.quotient_nodes);
    json qs = json::array();
    for (const auto& q : ql.quotients) qs.push_back(quotient_json(q));
    out["quotients"] = json{{"complete", ql.complete}, {"list", qs}};
    if (!as_json)
      std::cout << "quotients through degree " << quotients << ": " << ql.quotients.size()
                << (ql.complete ? "" : " (search truncated)") << "\n";
  }
  if (find_order2) {
    WitnessBudget b;
    if (max_word_len > 0) b.max_word_len = max_word_len;
    if (max_nodes > 0) b.max_nodes = max_nodes;
    auto cert = find_order2_witness(p, b);
    if (cert) {
      out["order2"] = order2_json(p, *cert);
      if (!as_json)
        std::cout << "order-2 witness: " << word_display(p, cert->witness) << "\n";
    } else {
      out["order2"] = nullptr;
      if (!as_json) std::cout << "order-2 witness: none found within budget\n";
    }
  }
  if (as_json) emit(out);
  return 0;
}

int cmd_simplify(const std::string& file, bool as_json, int depth, long long nodes) {
  ProjectiveDiagram d = load_valid_diagram(file);
  SearchBudget b;
  if (depth > 0) b.max_depth = depth;
  if (nodes > 0) b.max_nodes = nodes;
  long long expanded = 0;
  auto cert = search_affine_reduction(d, b, &expanded);
  if (as_json) {
    json out{{"found", cert.has_value()}, {"nodes_expanded", expanded}};
    if (cert) out["certificate"] = reduction_json(*cert);
    emit(out);
  } else if (cert) {
    std::cout << "reduced to a wall-free diagram in " << cert->moves.size() << " move"
              << (cert->moves.size() == 1 ? "" : "s") << ":\n";
    for (const auto& m : cert->moves) std::cout << "  " << m.kind << "\n";
  } else {
    std::cout << "no reduction found within budget\n";
  }
  return 0;
}

int cmd_replay(const std::string& file, const std::string& cert_file, bool as_json) {
  ProjectiveDiagram d = load_valid_diagram(file);
  json j = json::parse(read_file(cert_file));
  if (j.contains("certificate")) j = j["certificate"];  // accept simplify output directly
  ReductionCertificate cert = reduction_from_json(j);
  bool ok = replay_reduction(d, cert);
  if (as_json)
    emit(json{{"ok", ok}});
  else
    std::cout << (ok ? "replay ok\n" : "replay failed\n");
  return ok ? 0 : 2;
}

int cmd_decide(const std::string& file, bool as_json, int moves_depth, int group_word_len) {
  ProjectiveDiagram d = load_valid_diagram(file);
  VerdictBudget b;
  if (moves_depth > 0) b.reduction.max_depth = moves_depth;
  if (group_word_len > 0) b.witness.max_word_len = group_word_len;
  Verdict v = decide_affine(d, b);

  if (as_json) {
    json out{{"status", to_string(v.status)}};
    json cert = nullptr;
    if (v.obstruction) {
      const auto& o = *v.obstruction;
      cert = json{{"type", "obstruction"},
                  {"kind", to_string(o.kind)},
                  {"component", o.component}};
      if (o.kind == ObstructionKind::kSelfLinking) cert["value"] = o.value;
      if (o.kind == ObstructionKind::kMod4)
        cert["exponents"] = json::array({o.exponent_a, o.exponent_b});
    } else if (v.reduction) {
      cert = json{{"type", "reduction"}, {"certificate", reduction_json(*v.reduction)}};
    } else if (v.order2) {
      GroupPresentation p = fundamental_group_presentation(d);
      cert = json{{"type", "order2"}, {"certificate", order2_json(p, *v.order2)}};
    }
    out["certificate"] = cert;
    out["budget_used"] = json{{"reduction_nodes", v.budget_used.reduction_nodes},
                              {"witness_words", v.budget_used.witness_words}};
    emit(out);
  } else {
    std::cout << to_string(v.status);
    if (v.obstruction) {
      const auto& o = *v.obstruction;
      std::cout << " (" << to_string(o.kind) << " on " << o.component;
      if (o.kind == ObstructionKind::kSelfLinking) std::cout << ", sl " << o.value;
      if (o.kind == ObstructionKind::kMod4)
        std::cout << ", exponents " << o.exponent_a << " and " << o.exponent_b;
      std::cout << ")";
    } else if (v.reduction) {
      std::cout << " (reduction, " << v.reduction->moves.size() << " moves)";
    } else if (v.order2) {
      std::cout << " (order-2 witness)";
    }
    std::cout << "\n";
  }
  switch (v.status) {
    case VerdictStatus::kAffine: return 0;
    case VerdictStatus::kNotAffine: return 3;
    default: return 4;
  }
}

int cmd_fixtures(const std::string& action, const std::string& name, bool as_json) {
  if (action == "list") {
    if (as_json) {
      json out = json::array();
      for (const auto& f : fixture_catalog()) out.push_back({{"name", f.name}, {"note", f.note}});
      emit(out);
    } else {
      for (const auto& f : fixture_catalog()) std::cout << f.name << ": " << f.note << "\n";
    }
    return 0;
  }
  // emit
  const Fixture* f = find_fixture(name);
  if (!f) throw io_error("unknown fixture '" + name + "'");
  if (as_json)
    emit(json{{"name", f->name}, {"note", f->note}, {"pld", f->pld}});
  else
    std::cout << f->pld;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective link diagram toolkit"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads for library searches")->capture_default_str();

  std::string file, component, cert_file, fx_action, fx_name;
  bool as_json = false, per_component = false, abelian = false, find_order2 = false;
  int max_crossings = 0, quotients = 0, max_word_len = 0, depth = 0, moves_depth = 0,
      group_word_len = 0;
  long long max_nodes = 0, nodes = 0;

  auto add_common = [&](CLI::App* c, bool with_file = true) {
    if (with_file) c->add_option("file", file, "diagram file (.pld)")->required();
    c->add_flag("--json", as_json, "machine-readable output");
    return c;
  };

  auto* c_validate = add_common(app.add_subcommand("validate", "check a diagram"));
  auto* c_components = add_common(app.add_subcommand("components", "list link components"));
  auto* c_invariants = add_common(app.add_subcommand("invariants", "homology, writhe, bracket, V"));
  c_invariants->add_flag("--per-component", per_component, "also compute per-component self-linking");
  c_invariants->add_option("--max-crossings", max_crossings, "state-sum crossing cap override");
  auto* c_lift = add_common(app.add_subcommand("lift", "two-fold cover of the diagram"));
  auto* c_sl = add_common(app.add_subcommand("sl", "self-linking of one component"));
  c_sl->add_option("--component", component, "component id")->required();
  auto* c_group = add_common(app.add_subcommand("group", "complement group presentation"));
  c_group->add_flag("--abelianization", abelian, "report the abelianization");
  c_group->add_option("--quotients", quotients, "search permutation quotients through this degree");
  c_group->add_flag("--find-order2", find_order2, "search for a certified order-2 element");
  c_group->add_option("--max-word-len", max_word_len, "witness word length budget");
  c_group->add_option("--max-nodes", max_nodes, "rewrite-search node budget");
  auto* c_simplify = add_common(app.add_subcommand("simplify", "search for a wall-free reduction"));
  c_simplify->add_option("--depth", depth, "move-sequence depth budget");
  c_simplify->add_option("--nodes", nodes, "search node budget");
  auto* c_replay = add_common(app.add_subcommand("replay", "replay a reduction certificate"));
  c_replay->add_option("certificate", cert_file, "certificate JSON file")->required();
  auto* c_decide = add_common(app.add_subcommand("decide", "three-valued affineness verdict"));
  c_decide->add_option("--moves-depth", moves_depth, "reduction search depth budget");
  c_decide->add_option("--group-word-len", group_word_len, "order-2 witness word length budget");
  auto* c_fixtures = add_common(app.add_subcommand("fixtures", "built-in example diagrams"), false);
  c_fixtures->add_option("action", fx_action, "list | emit")
      ->required()
      ->check(CLI::IsMember({"list", "emit"}));
  c_fixtures->add_option("name", fx_name, "fixture name (for emit)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors exit 1; --help exits 0
  }

  try {
    if (c_validate->parsed()) return cmd_validate(file, as_json);
    if (c_components->parsed()) return cmd_components(file, as_json);
    if (c_invariants->parsed()) return cmd_invariants(file, as_json, per_component, max_crossings);
    if (c_lift->parsed()) return cmd_lift(file, as_json);
    if (c_sl->parsed()) return cmd_sl(file, component, as_json);
    if (c_group->parsed())
      return cmd_group(file, as_json, abelian, quotients, find_order2, max_word_len, max_nodes);
    if (c_simplify->parsed()) return cmd_simplify(file, as_json, depth, nodes);
    if (c_replay->parsed()) return cmd_replay(file, cert_file, as_json);
    if (c_decide->parsed()) return cmd_decide(file, as_json, moves_depth, group_word_len);
    if (c_fixtures->parsed()) {
      if (fx_action == "emit" && fx_name.empty()) {
        std::cerr << "fixtures emit requires a name\n";
        return 1;
      }
      return cmd_fixtures(fx_action, fx_name, as_json);
    }
  } catch (const diagram_invalid& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
