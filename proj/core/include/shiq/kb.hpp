// Knowledge bases: RBox/TBox/ABox syntax, RBox closure (role hierarchy,
// transitivity, simple/numeric role classification), TBox internalization,
// the closure set of a KB and the size measure used for complexity checks.
#ifndef SHIQ_KB_HPP
#define SHIQ_KB_HPP

#include <map>
#include <set>
#include <vector>

#include "shiq/formula.hpp"
#include "shiq/terms.hpp"

namespace shiq {

struct RoleAxiom {
  Role sub, sup;  // sub is subsumed by sup
};

struct TransAxiom {
  Role role;
};

enum class TBoxKind { Subsumption, Equivalence };

struct TBoxAxiom {
  TBoxKind kind = TBoxKind::Subsumption;
  ConceptId lhs = kNoConcept;
  ConceptId rhs = kNoConcept;
};

struct KnowledgeBase {
  std::vector<RoleAxiom> roleAxioms;
  std::vector<TransAxiom> transAxioms;
  std::vector<TBoxAxiom> tbox;
  std::vector<Formula> abox;  // ConceptF / RoleF / Distinct only
};

// Reflexive-transitive, inverse-closed role hierarchy plus the derived role
// classifications.  `roles` holds every role that occurs in the KB (both
// polarities of every role name that appears anywhere).
struct RBoxClosure {
  std::vector<Role> roles;
  std::map<Role, std::set<Role>> subsumers;  // r -> { s : r is subsumed by s }
  std::set<Role> transitive;
  std::set<Role> numeric;

  bool subsumedBy(Role r, Role s) const;
  bool isTransitive(Role r) const { return transitive.count(r) != 0; }
  bool isNumeric(Role r) const { return numeric.count(r) != 0; }
  // A role is simple when no transitive role is below it in the hierarchy.
  bool isSimple(Role r) const;
  // All s with r subsumed by s, including r itself.
  std::vector<Role> superRoles(Role r) const;
};

// A KB normalized for the tableau: ABox concepts in NNF, TBox internalized
// into a set of NNF concepts, RBox closure computed.  Throws KbError when a
// non-simple role occurs under a number restriction.
struct NormalizedKb {
  KnowledgeBase kb;  // original axioms with ABox concepts in NNF
  std::vector<ConceptId> tboxConcepts;
  RBoxClosure rbox;
  std::vector<Indiv> individuals;
};

// Computes the RBox closure for the given axioms.  `occurring` must list
// every role name occurring in the KB; `numberRestricted` the roles appearing
// under qualified number restrictions.
RBoxClosure computeRBoxClosure(const std::vector<RoleAxiom>& roleAxioms,
                               const std::vector<TransAxiom>& transAxioms,
                               const std::set<Role>& occurring,
                               const std::set<Role>& numberRestricted);

// Internalizes one TBox axiom into a (set of) NNF concepts: C sub D becomes
// nnf(not C) or D; equivalence contributes both directions.
std::vector<ConceptId> internalizeTBox(TermContext& ctx,
                                       const std::vector<TBoxAxiom>& tbox);

NormalizedKb normalizeKb(TermContext& ctx, const KnowledgeBase& kb);

// The closure set of a normalized KB: every formula that may ever occur in a
// tableau node label.  Intended for inspection and invariant checking; size
// is cubic in kbSize, so keep the numbers in number restrictions moderate.
std::set<Formula> closureSet(TermContext& ctx, const NormalizedKb& nkb);

// Size measure: one unit per constructor/symbol occurrence plus the bit
// length of every number in a number restriction.
uint64_t conceptSize(const TermContext& ctx, ConceptId c);
uint64_t kbSize(const TermContext& ctx, const KnowledgeBase& kb);

}  // namespace shiq

#endif
