#include "shiq/kb.hpp"

#include <bit>
#include <deque>
#include <functional>

namespace shiq {

bool RBoxClosure::subsumedBy(Role r, Role s) const {
  if (r == s) return true;
  auto it = subsumers.find(r);
  return it != subsumers.end() && it->second.count(s) != 0;
}

bool RBoxClosure::isSimple(Role r) const {
  for (Role s : roles)
    if (subsumedBy(s, r) && isTransitive(s)) return false;
  return !isTransitive(r);
}

std::vector<Role> RBoxClosure::superRoles(Role r) const {
  std::vector<Role> out;
  out.push_back(r);
  auto it = subsumers.find(r);
  if (it != subsumers.end())
    for (Role s : it->second)
      if (s != r) out.push_back(s);
  return out;
}

RBoxClosure computeRBoxClosure(const std::vector<RoleAxiom>& roleAxioms,
                               const std::vector<TransAxiom>& transAxioms,
                               const std::set<Role>& occurring,
                               const std::set<Role>& numberRestricted) {
  RBoxClosure rc;
  std::set<Role> roles = occurring;
  for (const auto& ax : roleAxioms) {
    roles.insert(ax.sub);
    roles.insert(ax.sup);
  }
  for (const auto& ax : transAxioms) roles.insert(ax.role);
  for (Role r : numberRestricted) roles.insert(r);
  // Both polarities of every role name.
  std::set<Role> all;
  for (Role r : roles) {
    all.insert(r);
    all.insert(r.inverse());
  }
  rc.roles.assign(all.begin(), all.end());

  // Hierarchy: reflexive, inverse-closed, transitively closed.
  for (Role r : rc.roles) rc.subsumers[r].insert(r);
  for (const auto& ax : roleAxioms) {
    rc.subsumers[ax.sub].insert(ax.sup);
    rc.subsumers[ax.sub.inverse()].insert(ax.sup.inverse());
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [r, sups] : rc.subsumers) {
      std::set<Role> add;
      for (Role s : sups) {
        auto it = rc.subsumers.find(s);
        if (it == rc.subsumers.end()) continue;
        for (Role t : it->second)
          if (sups.count(t) == 0) add.insert(t);
      }
      if (!add.empty()) {
        sups.insert(add.begin(), add.end());
        changed = true;
      }
    }
  }

  // Transitivity is closed under inversion.
  for (const auto& ax : transAxioms) {
    rc.transitive.insert(ax.role);
    rc.transitive.insert(ax.role.inverse());
  }

  for (Role r : numberRestricted)
    if (!rc.isSimple(r))
      throw KbError("non-simple role under a number restriction: role name id " +
                    std::to_string(r.name()));

  // Numeric roles: number-restricted roles, closed under subroles and
  // inversion.
  std::deque<Role> work(numberRestricted.begin(), numberRestricted.end());
  while (!work.empty()) {
    Role r = work.front();
    work.pop_front();
    if (!rc.numeric.insert(r).second) continue;
    work.push_back(r.inverse());
    for (Role s : rc.roles)
      if (rc.subsumedBy(s, r)) work.push_back(s);
  }
  return rc;
}

std::vector<ConceptId> internalizeTBox(TermContext& ctx,
                                       const std::vector<TBoxAxiom>& tbox) {
  std::vector<ConceptId> out;
  for (const auto& ax : tbox) {
    ConceptId fwd = ctx.nnf(ctx.mkOr(ctx.mkNot(ax.lhs), ax.rhs));
    if (ax.kind == TBoxKind::Equivalence) {
      ConceptId bwd = ctx.nnf(ctx.mkOr(ctx.mkNot(ax.rhs), ax.lhs));
      fwd = ctx.mkAnd(fwd, bwd);
    }
    if (fwd != ctx.top()) out.push_back(fwd);
  }
  return out;
}

namespace {

void collectRoles(const TermContext& ctx, ConceptId c, std::set<Role>& occ,
                  std::set<Role>& numberRestricted) {
  const ConceptNode& n = ctx.node(c);
  if (n.role.valid()) {
    occ.insert(n.role);
    if (n.kind == CKind::AtLeast || n.kind == CKind::AtMost ||
        n.kind == CKind::MinPend || n.kind == CKind::MaxPend)
      numberRestricted.insert(n.role);
  }
  if (n.lhs != kNoConcept) collectRoles(ctx, n.lhs, occ, numberRestricted);
  if (n.rhs != kNoConcept) collectRoles(ctx, n.rhs, occ, numberRestricted);
}

void collectSubconcepts(const TermContext& ctx, ConceptId c,
                        std::set<ConceptId>& out) {
  if (!out.insert(c).second) return;
  const ConceptNode& n = ctx.node(c);
  if (n.lhs != kNoConcept) collectSubconcepts(ctx, n.lhs, out);
  if (n.rhs != kNoConcept) collectSubconcepts(ctx, n.rhs, out);
}

}  // namespace

NormalizedKb normalizeKb(TermContext& ctx, const KnowledgeBase& kb) {
  NormalizedKb nkb;
  nkb.kb = kb;
  for (Formula& f : nkb.kb.abox)
    if (f.kind == FKind::ConceptF) f.conceptId = ctx.nnf(f.conceptId);
  nkb.tboxConcepts = internalizeTBox(ctx, kb.tbox);

  std::set<Indiv> indivs;
  for (const Formula& f : nkb.kb.abox) {
    if (f.subject != kNoIndiv) indivs.insert(f.subject);
    if (f.object != kNoIndiv) indivs.insert(f.object);
  }
  if (nkb.kb.abox.empty()) {
    Indiv fresh = ctx.individuals().intern("__a0");
    nkb.kb.abox.push_back(Formula::conceptAt(fresh, ctx.top()));
    indivs.insert(fresh);
  }
  nkb.individuals.assign(indivs.begin(), indivs.end());

  std::set<Role> occ, numberRestricted;
  for (const Formula& f : nkb.kb.abox) {
    if (f.kind == FKind::ConceptF)
      collectRoles(ctx, f.conceptId, occ, numberRestricted);
    else if (f.role.valid())
      occ.insert(f.role);
  }
  for (ConceptId c : nkb.tboxConcepts)
    collectRoles(ctx, c, occ, numberRestricted);
  nkb.rbox = computeRBoxClosure(kb.roleAxioms, kb.transAxioms, occ,
                                numberRestricted);
  return nkb;
}

std::set<Formula> closureSet(TermContext& ctx, const NormalizedKb& nkb) {
  const RBoxClosure& rc = nkb.rbox;
  std::set<ConceptId> concepts;
  std::set<Formula> gamma;

  for (ConceptId c : nkb.tboxConcepts) collectSubconcepts(ctx, c, concepts);
  for (const Formula& f : nkb.kb.abox) {
    gamma.insert(f);
    if (f.kind == FKind::ConceptF) collectSubconcepts(ctx, f.conceptId, concepts);
  }
  concepts.insert(ctx.top());

  // Numeric-role pairs contribute the merge-decision vocabulary.
  for (Role r : rc.roles)
    for (Role s : rc.roles)
      if (rc.isNumeric(r) && rc.isNumeric(s) && rc.subsumedBy(s, r)) {
        concepts.insert(ctx.exists(s, ctx.topAnn(r)));
        concepts.insert(ctx.forall(s, ctx.bottom()));
        concepts.insert(ctx.topAnn(r));
        concepts.insert(ctx.bottom());
      }

  // Saturate the concept part.
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<ConceptId> add;
    for (ConceptId c : concepts) {
      const ConceptNode& n = ctx.node(c);
      if (n.kind == CKind::Forall)
        for (Role r : rc.roles)
          if (rc.subsumedBy(r, n.role)) add.insert(ctx.forall(r, n.lhs));
      if (n.kind == CKind::AtMost && n.num == 0)
        add.insert(ctx.forall(n.role, ctx.complement(n.lhs)));
      if (!ctx.isPending(c)) add.insert(ctx.complement(c));
      if (n.kind == CKind::Exists && rc.isNumeric(n.role))
        add.insert(ctx.minPend(1, n.role, n.lhs));
      if (n.kind == CKind::AtLeast)
        for (uint64_t m = 0; m < n.num; ++m)
          add.insert(ctx.minPend(n.num - m, n.role, n.lhs));
      if (n.kind == CKind::AtMost)
        for (uint64_t m = 0; m <= n.num; ++m)
          add.insert(ctx.maxPend(n.num - m, n.role, n.lhs));
    }
    for (ConceptId c : add) {
      std::set<ConceptId> sub;
      collectSubconcepts(ctx, c, sub);
      for (ConceptId s : sub)
        if (concepts.insert(s).second) changed = true;
    }
  }

  for (ConceptId c : concepts) gamma.insert(Formula::conceptOnly(c));
  for (ConceptId c : concepts)
    for (Indiv a : nkb.individuals) gamma.insert(Formula::conceptAt(a, c));
  for (Indiv a : nkb.individuals)
    for (Indiv b : nkb.individuals) {
      gamma.insert(Formula::equal(a, b));
      gamma.insert(Formula::distinct(a, b));
    }

  // Role-assertion part: inversion, negation, hierarchy both ways.
  changed = true;
  while (changed) {
    changed = false;
    std::set<Formula> add;
    for (const Formula& f : gamma) {
      if (f.kind != FKind::RoleF) continue;
      add.insert(Formula::roleAssert(f.role.inverse(), f.object, f.subject));
      add.insert(Formula::negRoleAssert(f.role, f.subject, f.object));
      for (Role s : rc.roles)
        if (rc.subsumedBy(f.role, s) || rc.subsumedBy(s, f.role))
          add.insert(Formula::roleAssert(s, f.subject, f.object));
    }
    for (const Formula& f : add)
      if (gamma.insert(f).second) changed = true;
  }
  return gamma;
}

uint64_t conceptSize(const TermContext& ctx, ConceptId c) {
  const ConceptNode& n = ctx.node(c);
  uint64_t size = 1;
  if (n.role.valid()) size += 1;
  if (n.kind == CKind::AtLeast || n.kind == CKind::AtMost ||
      n.kind == CKind::MinPend || n.kind == CKind::MaxPend)
    size += n.num == 0 ? 1 : static_cast<uint64_t>(std::bit_width(n.num));
  if (n.lhs != kNoConcept) size += conceptSize(ctx, n.lhs);
  if (n.rhs != kNoConcept) size += conceptSize(ctx, n.rhs);
  return size;
}

uint64_t kbSize(const TermContext& ctx, const KnowledgeBase& kb) {
  uint64_t size = 0;
  size += 2 * kb.roleAxioms.size();
  size += kb.transAxioms.size();
  for (const auto& ax : kb.tbox)
    size += conceptSize(ctx, ax.lhs) + conceptSize(ctx, ax.rhs);
  for (const Formula& f : kb.abox) {
    switch (f.kind) {
      case FKind::ConceptF:
        size += 1 + conceptSize(ctx, f.conceptId);
        break;
      case FKind::RoleF:
      case FKind::NegRoleF:
        size += 3;
        break;
      case FKind::Distinct:
      case FKind::Equal:
        size += 2;
        break;
    }
  }
  return size;
}

}  // namespace shiq
