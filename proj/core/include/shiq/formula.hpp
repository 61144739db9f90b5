// Formulas are the elements of node labels: concept memberships (optionally
// about a named individual), role assertions and (in)equalities between
// individuals.  FormulaSet is a small sorted-vector set with a cached-free
// fingerprint used by the proxy indexes.
#ifndef SHIQ_FORMULA_HPP
#define SHIQ_FORMULA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "shiq/terms.hpp"

namespace shiq {

enum class FKind : uint8_t {
  ConceptF,   // a : C, or plain C when subject == kNoIndiv
  RoleF,      // R(a, b)
  NegRoleF,   // not R(a, b)
  Distinct,   // a != b
  Equal,      // a == b (bookkeeping for merges; never in ABox input)
};

struct Formula {
  FKind kind = FKind::ConceptF;
  Indiv subject = kNoIndiv;
  Indiv object = kNoIndiv;
  Role role;
  ConceptId conceptId = kNoConcept;

  static Formula conceptAt(Indiv a, ConceptId c) {
    Formula f;
    f.kind = FKind::ConceptF;
    f.subject = a;
    f.conceptId = c;
    return f;
  }
  static Formula conceptOnly(ConceptId c) { return conceptAt(kNoIndiv, c); }
  static Formula roleAssert(Role r, Indiv a, Indiv b) {
    Formula f;
    f.kind = FKind::RoleF;
    f.role = r;
    f.subject = a;
    f.object = b;
    return f;
  }
  static Formula negRoleAssert(Role r, Indiv a, Indiv b) {
    Formula f = roleAssert(r, a, b);
    f.kind = FKind::NegRoleF;
    return f;
  }
  static Formula distinct(Indiv a, Indiv b) {
    Formula f;
    f.kind = FKind::Distinct;
    f.subject = a;
    f.object = b;
    return f;
  }
  static Formula equal(Indiv a, Indiv b) {
    Formula f;
    f.kind = FKind::Equal;
    f.subject = a;
    f.object = b;
    return f;
  }

  bool operator==(const Formula& o) const {
    return kind == o.kind && subject == o.subject && object == o.object &&
           role == o.role && conceptId == o.conceptId;
  }
  bool operator!=(const Formula& o) const { return !(*this == o); }
  bool operator<(const Formula& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (subject != o.subject) return subject < o.subject;
    if (object != o.object) return object < o.object;
    if (role != o.role) return role < o.role;
    return conceptId < o.conceptId;
  }

  uint64_t hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(kind));
    mix(subject);
    mix(object);
    mix(role.valid() ? role.code() : 0xFFFFFFFFull);
    mix(conceptId);
    return h;
  }
};

class FormulaSet {
public:
  FormulaSet() = default;
  explicit FormulaSet(std::vector<Formula> v);

  bool contains(const Formula& f) const;
  // Returns true if the formula was newly inserted.
  bool insert(const Formula& f);
  bool erase(const Formula& f);
  void unionWith(const FormulaSet& o);
  // this minus o.
  FormulaSet difference(const FormulaSet& o) const;

  bool empty() const { return items_.size() == 0; }
  size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<Formula>& items() const { return items_; }

  bool operator==(const FormulaSet& o) const { return items_ == o.items_; }
  bool operator!=(const FormulaSet& o) const { return !(*this == o); }

  // Order-independent fingerprint; equal sets have equal fingerprints.
  uint64_t fingerprint() const;

private:
  std::vector<Formula> items_;  // sorted, unique
};

// Syntactic complement of a formula, when defined: concept memberships map to
// the complemented concept, role assertions flip polarity.  Returns false for
// Distinct/Equal.
bool complementFormula(TermContext& ctx, const Formula& f, Formula& out);

std::string formulaToString(const TermContext& ctx, const Formula& f);
std::string setToString(const TermContext& ctx, const FormulaSet& s);

}  // namespace shiq

#endif
