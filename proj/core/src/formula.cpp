#include "shiq/formula.hpp"

#include <algorithm>

namespace shiq {

FormulaSet::FormulaSet(std::vector<Formula> v) : items_(std::move(v)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool FormulaSet::contains(const Formula& f) const {
  return std::binary_search(items_.begin(), items_.end(), f);
}

bool FormulaSet::insert(const Formula& f) {
  auto it = std::lower_bound(items_.begin(), items_.end(), f);
  if (it != items_.end() && *it == f) return false;
  items_.insert(it, f);
  return true;
}

bool FormulaSet::erase(const Formula& f) {
  auto it = std::lower_bound(items_.begin(), items_.end(), f);
  if (it == items_.end() || *it != f) return false;
  items_.erase(it);
  return true;
}

void FormulaSet::unionWith(const FormulaSet& o) {
  if (o.empty()) return;
  std::vector<Formula> merged;
  merged.reserve(items_.size() + o.items_.size());
  std::set_union(items_.begin(), items_.end(), o.items_.begin(),
                 o.items_.end(), std::back_inserter(merged));
  items_ = std::move(merged);
}

FormulaSet FormulaSet::difference(const FormulaSet& o) const {
  FormulaSet out;
  std::set_difference(items_.begin(), items_.end(), o.items_.begin(),
                      o.items_.end(), std::back_inserter(out.items_));
  return out;
}

uint64_t FormulaSet::fingerprint() const {
  // Elements are sorted, so a sequential mix is order-independent across
  // equal sets.
  uint64_t h = 14695981039346656037ull;
  for (const Formula& f : items_) {
    h ^= f.hash();
    h *= 1099511628211ull;
  }
  return h;
}

bool complementFormula(TermContext& ctx, const Formula& f, Formula& out) {
  switch (f.kind) {
    case FKind::ConceptF:
      if (ctx.isPending(f.conceptId)) return false;
      out = Formula::conceptAt(f.subject, ctx.complement(f.conceptId));
      return true;
    case FKind::RoleF:
      out = Formula::negRoleAssert(f.role, f.subject, f.object);
      return true;
    case FKind::NegRoleF:
      out = Formula::roleAssert(f.role, f.subject, f.object);
      return true;
    case FKind::Distinct:
    case FKind::Equal:
      return false;
  }
  return false;
}

std::string formulaToString(const TermContext& ctx, const Formula& f) {
  const auto& ind = ctx.individuals();
  switch (f.kind) {
    case FKind::ConceptF:
      if (f.subject == kNoIndiv) return ctx.conceptToString(f.conceptId);
      return ind.name(f.subject) + " : " + ctx.conceptToString(f.conceptId);
    case FKind::RoleF:
      return ctx.roleToString(f.role) + "(" + ind.name(f.subject) + "," +
             ind.name(f.object) + ")";
    case FKind::NegRoleF:
      return "not " + ctx.roleToString(f.role) + "(" + ind.name(f.subject) +
             "," + ind.name(f.object) + ")";
    case FKind::Distinct:
      return ind.name(f.subject) + " != " + ind.name(f.object);
    case FKind::Equal:
      return ind.name(f.subject) + " == " + ind.name(f.object);
  }
  return "";
}

std::string setToString(const TermContext& ctx, const FormulaSet& s) {
  std::string out = "{";
  bool first = true;
  for (const Formula& f : s) {
    if (!first) out += ", ";
    first = false;
    out += formulaToString(ctx, f);
  }
  out += "}";
  return out;
}

}  // namespace shiq
