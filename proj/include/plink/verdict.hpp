#pragma once

// Three-valued affineness decision. A link in RP^3 is affine when it is
// isotopic to one contained in a ball disjoint from some projective plane.
//
// The pipeline runs cheap sound obstructions first, then certificate
// searches:
//   1. any component of homology class 1        -> NOT_AFFINE (HOMOLOGY)
//   2. any component with self-linking != 0     -> NOT_AFFINE (SELF_LINKING)
//   3. any component whose normalized bracket
//      has exponents mixed mod 4                -> NOT_AFFINE (MOD4)
//   4. a replayable move sequence to a wall-free
//      diagram                                  -> AFFINE (reduction)
//   5. a certified order-2 element of the
//      complement group                         -> AFFINE (order-2 witness)
//   6. otherwise                                -> UNKNOWN
// Budget exhaustion only ever degrades toward UNKNOWN.

#include <optional>
#include <stdexcept>
#include <string>

#include "plink/covering.hpp"
#include "plink/diagram.hpp"
#include "plink/diagram_ops.hpp"
#include "plink/group.hpp"
#include "plink/invariants.hpp"
#include "plink/laurent.hpp"
#include "plink/moves.hpp"

namespace plink {

enum class VerdictStatus { kAffine, kNotAffine, kUnknown };

enum class ObstructionKind { kHomology, kSelfLinking, kMod4 };

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kAffine: return "AFFINE";
    case VerdictStatus::kNotAffine: return "NOT_AFFINE";
    default: return "UNKNOWN";
  }
}

inline const char* to_string(ObstructionKind k) {
  switch (k) {
    case ObstructionKind::kHomology: return "HOMOLOGY";
    case ObstructionKind::kSelfLinking: return "SELF_LINKING";
    default: return "MOD4";
  }
}

struct ObstructionReport {
  ObstructionKind kind = ObstructionKind::kHomology;
  std::string component;  // offending component id
  int value = 0;          // homology class or self-linking value
  int exponent_a = 0;     // violating exponent pair for MOD4
  int exponent_b = 0;
};

struct VerdictBudget {
  SearchBudget reduction;
  WitnessBudget witness;
};

struct BudgetUsed {
  long long reduction_nodes = 0;  // nodes expanded by the move search
  long long witness_words = 0;    // candidate words examined by the group search
};

struct Verdict {
  VerdictStatus status = VerdictStatus::kUnknown;
  std::optional<ObstructionReport> obstruction;       // NOT_AFFINE
  std::optional<ReductionCertificate> reduction;      // AFFINE via moves
  std::optional<Order2Certificate> order2;            // AFFINE via the group
  BudgetUsed budget_used;
};

inline Verdict decide_affine(const ProjectiveDiagram& d, const VerdictBudget& budget = {}) {
  DiagramAnalysis a = analyze(d);
  if (!a.report.ok) throw std::invalid_argument("decide_affine: diagram fails validation");

  Verdict v;

  // 1. Homology: every component of an affine link is null-homologous.
  for (const auto& c : a.components)
    if (homology_class(c) != 0) {
      v.status = VerdictStatus::kNotAffine;
      v.obstruction = ObstructionReport{ObstructionKind::kHomology, c.id, 1, 0, 0};
      return v;
    }

  // 2. Self-linking: an affine knot has self-linking 0. All components are
  // class 0 here; affineness of the link makes each component affine.
  for (const auto& c : a.components) {
    if (c.is_free_circle) continue;
    SelfLinking sl = self_linking(d, c.id);
    if (sl.value != 0) {
      v.status = VerdictStatus::kNotAffine;
      v.obstruction = ObstructionReport{ObstructionKind::kSelfLinking, c.id, sl.value, 0, 0};
      return v;
    }
  }

  // 3. Mod-4 exponents, per component: the normalized bracket of an affine
  // knot has all exponents congruent mod 4. Skipped (never obstructs) when
  // the sub-diagram exceeds the state-sum crossing cap.
  for (const auto& c : a.components) {
    if (c.is_free_circle) continue;
    try {
      ProjectiveDiagram sub = delete_components(d, {c.id});
      BracketValue val = jones_v(sub);
      int e1 = 0, e2 = 0;
      if (mod4_violating_pair(val.poly, e1, e2)) {
        v.status = VerdictStatus::kNotAffine;
        v.obstruction = ObstructionReport{ObstructionKind::kMod4, c.id, 0, e1, e2};
        return v;
      }
    } catch (const std::exception&) {
      // state sum over the cap: this check contributes nothing
    }
  }

  // 4. Move search for a wall-free diagram. The certificate is replayed
  // through the independent replayer before being trusted.
  if (auto cert = search_affine_reduction(d, budget.reduction, &v.budget_used.reduction_nodes)) {
    if (replay_reduction(d, *cert)) {
      v.status = VerdictStatus::kAffine;
      v.reduction = std::move(*cert);
      return v;
    }
  }

  // 5. Order-2 witness in the complement group: sufficient for affineness.
  {
    GroupPresentation p = fundamental_group_presentation(d);
    if (auto cert = find_order2_witness(p, budget.witness, &v.budget_used.witness_words)) {
      if (replay_order2_certificate(p, *cert)) {
        v.status = VerdictStatus::kAffine;
        v.order2 = std::move(*cert);
        return v;
      }
    }
  }

  v.status = VerdictStatus::kUnknown;
  return v;
}

}  // namespace plink
