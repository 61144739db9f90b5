#include "shiq/terms.hpp"

#include <cassert>
#include <functional>

namespace shiq {

NameId SymbolTable::intern(const std::string& s) {
  auto it = index_.find(s);
  if (it != index_.end()) return it->second;
  NameId id = static_cast<NameId>(names_.size());
  names_.push_back(s);
  index_.emplace(s, id);
  return id;
}

bool SymbolTable::lookup(const std::string& s, NameId& out) const {
  auto it = index_.find(s);
  if (it == index_.end()) return false;
  out = it->second;
  return true;
}

namespace {
uint64_t hashNode(const ConceptNode& n) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<uint64_t>(n.kind));
  mix(n.role.valid() ? n.role.code() : 0xFFFFFFFFull);
  mix(n.num);
  mix(n.name);
  mix(n.lhs);
  mix(n.rhs);
  return h;
}

bool sameNode(const ConceptNode& a, const ConceptNode& b) {
  return a.kind == b.kind && a.role == b.role && a.num == b.num &&
         a.name == b.name && a.lhs == b.lhs && a.rhs == b.rhs;
}
}  // namespace

TermContext::TermContext() {
  ConceptNode t;
  t.kind = CKind::Top;
  top_ = intern(t);
  ConceptNode b;
  b.kind = CKind::Bottom;
  bottom_ = intern(b);
}

ConceptId TermContext::intern(const ConceptNode& n) {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t h = hashNode(n);
  auto& bucket = index_[h];
  for (ConceptId id : bucket)
    if (sameNode(pool_[id], n)) return id;
  ConceptId id = static_cast<ConceptId>(pool_.size());
  pool_.push_back(n);
  bucket.push_back(id);
  return id;
}

ConceptId TermContext::topAnn(Role r) {
  ConceptNode n;
  n.kind = CKind::TopAnn;
  n.role = r;
  return intern(n);
}

ConceptId TermContext::atom(NameId name) {
  ConceptNode n;
  n.kind = CKind::Atom;
  n.name = name;
  return intern(n);
}

ConceptId TermContext::negAtom(NameId name) {
  ConceptNode n;
  n.kind = CKind::NegAtom;
  n.name = name;
  return intern(n);
}

ConceptId TermContext::mkNot(ConceptId c) {
  ConceptNode n;
  n.kind = CKind::Not;
  n.lhs = c;
  return intern(n);
}

ConceptId TermContext::mkAnd(ConceptId a, ConceptId b) {
  if (a == bottom_ || b == bottom_) return bottom_;
  if (a == top_) return b;
  if (b == top_) return a;
  ConceptNode n;
  n.kind = CKind::And;
  n.lhs = a;
  n.rhs = b;
  return intern(n);
}

ConceptId TermContext::mkOr(ConceptId a, ConceptId b) {
  if (a == top_ || b == top_) return top_;
  if (a == bottom_) return b;
  if (b == bottom_) return a;
  ConceptNode n;
  n.kind = CKind::Or;
  n.lhs = a;
  n.rhs = b;
  return intern(n);
}

ConceptId TermContext::exists(Role r, ConceptId body) {
  ConceptNode n;
  n.kind = CKind::Exists;
  n.role = r;
  n.lhs = body;
  return intern(n);
}

ConceptId TermContext::forall(Role r, ConceptId body) {
  ConceptNode n;
  n.kind = CKind::Forall;
  n.role = r;
  n.lhs = body;
  return intern(n);
}

ConceptId TermContext::atLeast(uint64_t num, Role r, ConceptId body) {
  ConceptNode n;
  n.kind = CKind::AtLeast;
  n.role = r;
  n.num = num;
  n.lhs = body;
  return intern(n);
}

ConceptId TermContext::atMost(uint64_t num, Role r, ConceptId body) {
  ConceptNode n;
  n.kind = CKind::AtMost;
  n.role = r;
  n.num = num;
  n.lhs = body;
  return intern(n);
}

ConceptId TermContext::minPend(uint64_t num, Role r, ConceptId body) {
  ConceptNode n;
  n.kind = CKind::MinPend;
  n.role = r;
  n.num = num;
  n.lhs = body;
  return intern(n);
}

ConceptId TermContext::maxPend(uint64_t num, Role r, ConceptId body) {
  ConceptNode n;
  n.kind = CKind::MaxPend;
  n.role = r;
  n.num = num;
  n.lhs = body;
  return intern(n);
}

ConceptId TermContext::nnf(ConceptId c) {
  const ConceptNode n = node(c);
  switch (n.kind) {
    case CKind::Top:
    case CKind::Bottom:
    case CKind::TopAnn:
    case CKind::Atom:
    case CKind::NegAtom:
      return c;
    case CKind::And:
      return mkAnd(nnf(n.lhs), nnf(n.rhs));
    case CKind::Or:
      return mkOr(nnf(n.lhs), nnf(n.rhs));
    case CKind::Exists:
      return exists(n.role, nnf(n.lhs));
    case CKind::Forall:
      return forall(n.role, nnf(n.lhs));
    case CKind::AtLeast:
      return atLeast(n.num, n.role, nnf(n.lhs));
    case CKind::AtMost:
      return atMost(n.num, n.role, nnf(n.lhs));
    case CKind::MinPend:
    case CKind::MaxPend:
      throw KbError("nnf: pending constructors have no negation normal form");
    case CKind::Not:
      break;
  }
  // Push the negation one level in.
  const ConceptNode m = node(n.lhs);
  switch (m.kind) {
    case CKind::Top:
    case CKind::TopAnn:
      return bottom_;
    case CKind::Bottom:
      return top_;
    case CKind::Atom:
      return negAtom(m.name);
    case CKind::NegAtom:
      return atom(m.name);
    case CKind::Not:
      return nnf(m.lhs);
    case CKind::And:
      return mkOr(nnf(mkNot(m.lhs)), nnf(mkNot(m.rhs)));
    case CKind::Or:
      return mkAnd(nnf(mkNot(m.lhs)), nnf(mkNot(m.rhs)));
    case CKind::Exists:
      return forall(m.role, nnf(mkNot(m.lhs)));
    case CKind::Forall:
      return exists(m.role, nnf(mkNot(m.lhs)));
    case CKind::AtLeast:
      if (m.num == 0) return bottom_;
      return atMost(m.num - 1, m.role, nnf(m.lhs));
    case CKind::AtMost:
      return atLeast(m.num + 1, m.role, nnf(m.lhs));
    case CKind::MinPend:
    case CKind::MaxPend:
      throw KbError("nnf: cannot negate pending constructors");
  }
  assert(false);
  return c;
}

ConceptId TermContext::complement(ConceptId c) {
  if (isPending(c))
    throw KbError("complement: undefined on pending constructors");
  return nnf(mkNot(c));
}

std::string TermContext::roleToString(Role r) const {
  if (!r.valid()) return "<norole>";
  std::string s = roleNames_.name(r.name());
  if (r.inverted()) return "inv(" + s + ")";
  return s;
}

// Precedence: or=1, and=2, not=3, atom=4.  Quantifier bodies extend greedily
// to the right, so a quantifier is parenthesized whenever it is not in tail
// position of the enclosing expression.
void TermContext::printConcept(ConceptId c, std::string& out, int parentPrec,
                               bool tail) const {
  const ConceptNode& n = node(c);
  auto paren = [&](bool need, auto body) {
    if (need) out += "(";
    body();
    if (need) out += ")";
  };
  switch (n.kind) {
    case CKind::Top:
      out += "Top";
      return;
    case CKind::Bottom:
      out += "Bottom";
      return;
    case CKind::TopAnn:
      out += "Top[" + roleToString(n.role) + "]";
      return;
    case CKind::Atom:
      out += conceptNames_.name(n.name);
      return;
    case CKind::NegAtom:
      paren(3 < parentPrec, [&] {
        out += "not ";
        out += conceptNames_.name(n.name);
      });
      return;
    case CKind::Not:
      paren(3 < parentPrec, [&] {
        out += "not ";
        printConcept(n.lhs, out, 4, tail && 3 >= parentPrec);
      });
      return;
    case CKind::And:
      // the parser is left-associative: a right operand of the same
      // precedence needs parentheses, a left operand does not
      paren(2 < parentPrec, [&] {
        printConcept(n.lhs, out, 2, false);
        out += " and ";
        printConcept(n.rhs, out, 3, tail && 2 >= parentPrec);
      });
      return;
    case CKind::Or:
      paren(1 < parentPrec, [&] {
        printConcept(n.lhs, out, 1, false);
        out += " or ";
        printConcept(n.rhs, out, 2, tail && 1 >= parentPrec);
      });
      return;
    case CKind::Exists:
    case CKind::Forall:
    case CKind::AtLeast:
    case CKind::AtMost:
    case CKind::MinPend:
    case CKind::MaxPend:
      paren(!tail, [&] {
        switch (n.kind) {
          case CKind::Exists: out += "some "; break;
          case CKind::Forall: out += "all "; break;
          case CKind::AtLeast: out += ">= " + std::to_string(n.num) + " "; break;
          case CKind::AtMost: out += "<= " + std::to_string(n.num) + " "; break;
          case CKind::MinPend: out += ">=p " + std::to_string(n.num) + " "; break;
          case CKind::MaxPend: out += "<=p " + std::to_string(n.num) + " "; break;
          default: break;
        }
        out += roleToString(n.role);
        out += " . ";
        printConcept(n.lhs, out, 0, true);
      });
      return;
  }
}

std::string TermContext::conceptToString(ConceptId c) const {
  std::string out;
  printConcept(c, out, 0, true);
  return out;
}

}  // namespace shiq
