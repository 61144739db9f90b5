// Interned term representation: role expressions, concept expressions and the
// symbol tables they refer to.  All concepts live in a TermContext pool;
// structural equality is pointer (id) equality.
#ifndef SHIQ_TERMS_HPP
#define SHIQ_TERMS_HPP

#include <cstdint>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace shiq {

using NameId = uint32_t;
using ConceptId = uint32_t;
using Indiv = uint32_t;

constexpr ConceptId kNoConcept = 0xFFFFFFFFu;
constexpr Indiv kNoIndiv = 0xFFFFFFFFu;

class KbError : public std::runtime_error {
public:
  explicit KbError(const std::string& msg) : std::runtime_error(msg) {}
};

// A role expression: a role name or its inverse.  Encoded as name*2+inv so
// roles are cheap to store in sets and compare.
class Role {
public:
  Role() : code_(kNone) {}
  Role(NameId name, bool inverse) : code_(name * 2 + (inverse ? 1 : 0)) {}

  static Role none() { return Role(); }
  bool valid() const { return code_ != kNone; }
  NameId name() const { return code_ / 2; }
  bool inverted() const { return code_ % 2 != 0; }
  Role inverse() const { return Role(name(), !inverted()); }
  uint32_t code() const { return code_; }
  static Role fromCode(uint32_t c) { Role r; r.code_ = c; return r; }

  bool operator==(const Role& o) const { return code_ == o.code_; }
  bool operator!=(const Role& o) const { return code_ != o.code_; }
  bool operator<(const Role& o) const { return code_ < o.code_; }

private:
  static constexpr uint32_t kNone = 0xFFFFFFFFu;
  uint32_t code_;
};

enum class CKind : uint8_t {
  Top,       // unqualified top
  Bottom,
  TopAnn,    // annotated top: semantically top, syntactically tied to a role
  Atom,      // concept name
  NegAtom,   // negated concept name
  Not,       // arbitrary negation; only present before NNF
  And,
  Or,
  Exists,    // some R.C
  Forall,    // all R.C
  AtLeast,   // >= n R.C
  AtMost,    // <= n R.C
  MinPend,   // pending >= n R.C bookkeeping constructor (no semantics)
  MaxPend,   // pending <= n R.C bookkeeping constructor (no semantics)
};

struct ConceptNode {
  CKind kind = CKind::Top;
  Role role;           // TopAnn and all role-bearing constructors
  uint64_t num = 0;    // AtLeast/AtMost/MinPend/MaxPend
  NameId name = 0;     // Atom/NegAtom
  ConceptId lhs = kNoConcept;  // And/Or left child; quantifier body; Not child
  ConceptId rhs = kNoConcept;  // And/Or right child
};

// Simple string interner.
class SymbolTable {
public:
  NameId intern(const std::string& s);
  const std::string& name(NameId id) const { return names_.at(id); }
  bool lookup(const std::string& s, NameId& out) const;
  size_t size() const { return names_.size(); }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NameId> index_;
};

// Owns all interned concepts plus the three symbol namespaces.  Concept ids
// are stable; the pool only grows.  Reads of existing nodes are lock-free
// (deque never moves elements); intern() serializes writers.
class TermContext {
public:
  TermContext();

  SymbolTable& conceptNames() { return conceptNames_; }
  SymbolTable& roleNames() { return roleNames_; }
  SymbolTable& individuals() { return individuals_; }
  const SymbolTable& conceptNames() const { return conceptNames_; }
  const SymbolTable& roleNames() const { return roleNames_; }
  const SymbolTable& individuals() const { return individuals_; }

  const ConceptNode& node(ConceptId id) const { return pool_[id]; }

  ConceptId top() const { return top_; }
  ConceptId bottom() const { return bottom_; }
  ConceptId topAnn(Role r);
  ConceptId atom(NameId n);
  ConceptId negAtom(NameId n);
  ConceptId mkNot(ConceptId c);
  // mkAnd/mkOr fold boolean constants (Bottom and X = Bottom, ...) but apply
  // no reordering or further simplification.
  ConceptId mkAnd(ConceptId a, ConceptId b);
  ConceptId mkOr(ConceptId a, ConceptId b);
  ConceptId exists(Role r, ConceptId body);
  ConceptId forall(Role r, ConceptId body);
  ConceptId atLeast(uint64_t n, Role r, ConceptId body);
  ConceptId atMost(uint64_t n, Role r, ConceptId body);
  ConceptId minPend(uint64_t n, Role r, ConceptId body);
  ConceptId maxPend(uint64_t n, Role r, ConceptId body);

  // Negation normal form; accepts any Not-bearing concept.  Throws KbError on
  // pending constructors (they have no semantics to normalize).
  ConceptId nnf(ConceptId c);
  // Complement of an NNF concept (nnf of its negation).  complement(topAnn)
  // is Bottom.  Throws KbError on pendings.
  ConceptId complement(ConceptId c);

  bool isPending(ConceptId c) const {
    CKind k = node(c).kind;
    return k == CKind::MinPend || k == CKind::MaxPend;
  }

  std::string roleToString(Role r) const;
  std::string conceptToString(ConceptId c) const;

  size_t poolSize() const { return pool_.size(); }

private:
  ConceptId intern(const ConceptNode& n);
  void printConcept(ConceptId c, std::string& out, int parentPrec,
                    bool tail) const;

  std::deque<ConceptNode> pool_;
  std::unordered_map<uint64_t, std::vector<ConceptId>> index_;
  mutable std::mutex mu_;
  ConceptId top_, bottom_;
  SymbolTable conceptNames_, roleNames_, individuals_;
};

}  // namespace shiq

#endif
