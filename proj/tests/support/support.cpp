#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace support {

using namespace shiq;

// ---------------------------------------------------------------------------
// corpus

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"example1",
       "r sub s; inv(r) sub s; trans(s);\n"
       "Top sub some r . (A and all s . not A);\n"
       "assert a : Top;\n",
       false},
      {"example2",
       "assert a : all r . A1; assert a : <= 3 r . A1;\n"
       "assert a : some r . A2; assert a : >= 2 r . A3;\n"
       "assert r(a, b); assert b : not A1 or not A2; assert b : not A3;\n",
       true},
      {"example3",
       "assert a : some r . A;\n"
       "assert a : all r . (not A or not B);\n"
       "assert a : >= 1000 r . B;\n"
       "assert a : <= 1000 r . (A or B);\n",
       false},
      {"top", "assert a : Top;\n", true},
      {"bottom", "assert a : Bottom;\n", false},
      {"clash", "assert a : A and not A;\n", false},
      {"tbox-clash", "(A) sub B; assert a : A and not B;\n", false},
      {"tbox-sat", "(A) sub B; assert a : A;\n", true},
      {"trans-prop",
       "trans(r);\n"
       "assert a : (some r . some r . A) and all r . not A;\n",
       false},
      {"inv-named",
       "assert r(a, b); assert b : all inv(r) . A; assert a : not A;\n",
       false},
      {"inv-anon",
       "assert a : (some r . (all inv(r) . A)) and not A;\n", false},
      {"hier",
       "r sub s; assert r(a, b); assert a : all s . A; assert b : not A;\n",
       false},
      {"count-conflict",
       "assert a : >= 2 r . A; assert a : <= 1 r . Top;\n", false},
      {"count-conflict2",
       "assert a : >= 2 r . A; assert a : <= 1 r . A;\n", false},
      {"count-sat",
       "assert a : >= 3 r . Top; assert a : <= 2 r . A;\n"
       "assert a : <= 2 r . not A;\n",
       true},
      {"count-unsat",
       "assert a : >= 4 r . Top; assert a : <= 1 r . A;\n"
       "assert a : <= 2 r . not A;\n",
       false},
      {"named-overflow",
       "assert r(a, b); assert r(a, c); assert b != c;\n"
       "assert a : <= 1 r . Top;\n",
       false},
      {"named-merge-clash",
       "assert r(a, b); assert r(a, c); assert a : <= 1 r . Top;\n"
       "assert b : A; assert c : not A;\n",
       false},
      {"named-merge-sat",
       "assert r(a, b); assert r(a, c); assert a : <= 1 r . Top;\n"
       "assert b : A; assert c : B;\n",
       true},
      {"choose",
       "assert r(a, b); assert a : <= 0 r . A; assert b : A;\n", false},
      {"big-unsat",
       "assert a : >= 1000000 r . A; assert a : <= 999999 r . Top;\n",
       false},
      {"cycle-sat", "A sub some r . A; assert a : A;\n", true},
      {"cycle-trans-sat",
       "trans(s); r sub s; A sub some r . A;\n"
       "assert a : A; assert a : all s . B;\n",
       true},
      {"cycle-unsat",
       "A sub some r . B; B sub some r . A; Top sub all r . not A;\n"
       "assert a : A;\n",
       false},
      {"merge-exists",
       "assert a : (some r . A) and (some r . B) and (<= 1 r . Top)\n"
       "  and (all r . (not A or not B));\n",
       false},
      {"merge-exists-sat",
       "assert a : (some r . A) and (some r . B) and (<= 1 r . Top);\n",
       true},
      {"inv-count-sat",
       "Top sub <= 1 inv(r) . Top; assert a : some r . Top;\n", true},
      {"equiv-unsat", "A equiv not B; assert a : A and B;\n", false},
      {"distinct-sat",
       "assert a != b; assert a : A; assert b : not A;\n", true},
      {"qualified-named",
       "assert r(a, b); assert r(a, c); assert b != c;\n"
       "assert a : <= 2 r . Top; assert a : >= 1 r . A;\n"
       "assert b : not A; assert c : not A;\n",
       false},
  };
  return entries;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

NormalizedKb loadKb(TermContext& ctx, const std::string& text) {
  auto parsed = parseKB(ctx, text);
  if (auto* err = std::get_if<ParseError>(&parsed))
    throw std::runtime_error("parse error: " + err->format());
  return normalizeKb(ctx, std::get<KnowledgeBase>(parsed));
}

// ---------------------------------------------------------------------------
// tableau invariants

namespace {

int statusRank(NodeStatus s) {
  switch (s) {
    case NodeStatus::Unexpanded: return 0;
    case NodeStatus::PExpanded: return 1;
    case NodeStatus::FExpanded: return 2;
    default: return 3;
  }
}

}  // namespace

std::vector<std::string> tableauViolations(const Tableau& t) {
  std::vector<std::string> out;
  auto fail = [&out](const std::string& s) { out.push_back(s); };

  // State-label uniqueness (global caching).
  std::map<uint64_t, NodeId> seenState;
  for (NodeId v = 0; v < t.nodeCount(); ++v) {
    const Node& n = t.node(v);
    if (n.type != NodeType::State) continue;
    uint64_t fp = n.label.fingerprint();
    auto [it, fresh] = seenState.emplace(fp, v);
    if (!fresh && t.node(it->second).label == n.label)
      fail("duplicate state label: nodes " + std::to_string(it->second) +
           " and " + std::to_string(v));
  }

  // Status-lattice monotonicity.
  for (NodeId v = 0; v < t.nodeCount(); ++v) {
    const Node& n = t.node(v);
    int prev = 0;
    for (size_t i = 0; i < n.statusHistory.size(); ++i) {
      NodeStatus s = n.statusHistory[i];
      int rank = statusRank(s);
      if (rank < prev)
        fail("status regression at node " + std::to_string(v));
      if (isFinal(s) && i + 1 != n.statusHistory.size())
        fail("status change after final status at node " + std::to_string(v));
      prev = rank;
    }
    if (!n.statusHistory.empty() && n.statusHistory.back() != n.status)
      fail("status history out of sync at node " + std::to_string(v));
  }

  // Every label/RFmls formula lies in the closure set.
  std::set<Formula> closure = closureSet(t.ctx(), t.kb());
  for (NodeId v = 0; v < t.nodeCount(); ++v) {
    const Node& n = t.node(v);
    for (const FormulaSet* fs : {&n.label, &n.rfmls})
      for (const Formula& f : *fs)
        if (closure.count(f) == 0)
          fail("formula outside closure at node " + std::to_string(v) + ": " +
               formulaToString(t.ctx(), f));
  }

  // Local graphs (non-state -> non-state edges) are acyclic.
  {
    std::vector<int> color(t.nodeCount(), 0);
    std::function<bool(NodeId)> dfs = [&](NodeId v) {
      color[v] = 1;
      for (NodeId w : t.node(v).succs) {
        if (t.node(w).type != NodeType::NonState) continue;
        if (color[w] == 1) return false;
        if (color[w] == 0 && !dfs(w)) return false;
      }
      color[v] = 2;
      return true;
    };
    for (NodeId v = 0; v < t.nodeCount(); ++v)
      if (t.node(v).type == NodeType::NonState && color[v] == 0 && !dfs(v))
        fail("cycle through non-state " + std::to_string(v));
  }

  // At most one re-expansion per non-state.
  for (NodeId v = 0; v < t.nodeCount(); ++v)
    if (t.node(v).reExpansions > 1)
      fail("node " + std::to_string(v) + " re-expanded " +
           std::to_string(t.node(v).reExpansions) + " times");

  return out;
}

// ---------------------------------------------------------------------------
// brute-force oracle

namespace {

enum TV : int { TvF = 0, TvU = 1, TvT = 2 };

void collectSymbols(const TermContext& ctx, ConceptId c,
                    std::set<NameId>& atoms, std::set<NameId>& roles) {
  const ConceptNode& n = ctx.node(c);
  if (n.kind == CKind::Atom || n.kind == CKind::NegAtom) atoms.insert(n.name);
  if (n.role.valid()) roles.insert(n.role.name());
  if (n.lhs != kNoConcept) collectSymbols(ctx, n.lhs, atoms, roles);
  if (n.rhs != kNoConcept) collectSymbols(ctx, n.rhs, atoms, roles);
}

struct Brute {
  TermContext& ctx;
  const NormalizedKb& nkb;
  std::vector<NameId> atomIds, roleIds;
  std::map<NameId, int> atomIdx, roleIdx;
  std::vector<Indiv> indivs;

  int n = 0;
  std::vector<uint8_t> atoms;          // per element bitmask
  std::vector<std::vector<int>> succ;  // [role][element] bitmask, -1 undecided
  std::vector<int> indivElem;

  uint64_t budget;
  bool exhausted = false;

  Brute(TermContext& c, const NormalizedKb& k, uint64_t b)
      : ctx(c), nkb(k), budget(b) {
    std::set<NameId> as, rs;
    for (ConceptId t : k.tboxConcepts) collectSymbols(c, t, as, rs);
    for (const Formula& f : k.kb.abox) {
      if (f.kind == FKind::ConceptF) collectSymbols(c, f.conceptId, as, rs);
      if (f.kind == FKind::RoleF) rs.insert(f.role.name());
    }
    for (NameId a : as) { atomIdx[a] = (int)atomIds.size(); atomIds.push_back(a); }
    for (NameId r : rs) { roleIdx[r] = (int)roleIds.size(); roleIds.push_back(r); }
    indivs = k.individuals;
  }

  bool tick() {
    if (budget == 0) { exhausted = true; return false; }
    --budget;
    return true;
  }

  // (definite, possible, decided) counts of R-successors of x satisfying c.
  struct Count { int definite = 0, possible = 0; bool decided = true; };

  Count countSucc(Role r, int x, ConceptId c) {
    Count out;
    int ri = roleIdx.at(r.name());
    for (int y = 0; y < n; ++y) {
      int bits = r.inverted() ? succ[ri][y] : succ[ri][x];
      bool edge, known;
      if (bits < 0) {
        known = false;
        edge = true;  // potentially
      } else {
        known = true;
        edge = r.inverted() ? ((bits >> x) & 1) : ((bits >> y) & 1);
      }
      if (!edge) continue;
      TV tv = eval(c, y);
      if (!known) {
        out.decided = false;
        if (tv != TvF) ++out.possible;
      } else {
        if (tv == TvT) ++out.definite;
        if (tv != TvF) ++out.possible;
        if (tv == TvU) out.decided = false;
      }
    }
    return out;
  }

  TV eval(ConceptId c, int x) {
    const ConceptNode& nd = ctx.node(c);
    switch (nd.kind) {
      case CKind::Top:
      case CKind::TopAnn: return TvT;
      case CKind::Bottom: return TvF;
      case CKind::Atom:
        return ((atoms[x] >> atomIdx.at(nd.name)) & 1) ? TvT : TvF;
      case CKind::NegAtom:
        return ((atoms[x] >> atomIdx.at(nd.name)) & 1) ? TvF : TvT;
      case CKind::And:
        return std::min(eval(nd.lhs, x), eval(nd.rhs, x));
      case CKind::Or:
        return std::max(eval(nd.lhs, x), eval(nd.rhs, x));
      case CKind::Exists: {
        Count cnt = countSucc(nd.role, x, nd.lhs);
        if (cnt.definite >= 1 && cnt.decided) return TvT;
        if (cnt.definite >= 1) return TvT;  // a definite witness suffices
        return cnt.possible >= 1 ? TvU : TvF;
      }
      case CKind::Forall: {
        ConceptId body = ctx.complement(nd.lhs);
        Count cnt = countSucc(nd.role, x, body);  // counter-examples
        if (cnt.possible == 0) return TvT;
        if (cnt.definite >= 1 && cnt.decided) return TvF;
        if (cnt.definite >= 1) {
          // a decided counter-example on a decided edge kills it
          return TvF;
        }
        return TvU;
      }
      case CKind::AtLeast: {
        Count cnt = countSucc(nd.role, x, nd.lhs);
        if ((uint64_t)cnt.possible < nd.num) return TvF;
        if (cnt.decided && (uint64_t)cnt.definite >= nd.num) return TvT;
        if ((uint64_t)cnt.definite >= nd.num && cnt.decided) return TvT;
        if ((uint64_t)cnt.definite >= nd.num) return TvT;
        return TvU;
      }
      case CKind::AtMost: {
        Count cnt = countSucc(nd.role, x, nd.lhs);
        if ((uint64_t)cnt.definite > nd.num) return TvF;
        if ((uint64_t)cnt.possible <= nd.num) return TvT;
        return TvU;
      }
      default:
        throw std::runtime_error("oracle: unexpected concept kind");
    }
  }

  TV checkAll() {
    TV acc = TvT;
    for (const Formula& f : nkb.kb.abox) {
      TV tv = TvT;
      switch (f.kind) {
        case FKind::ConceptF:
          tv = eval(f.conceptId, indivElem[indivIndex(f.subject)]);
          break;
        case FKind::RoleF: {
          Role r = f.role;
          int x = indivElem[indivIndex(f.subject)];
          int y = indivElem[indivIndex(f.object)];
          if (r.inverted()) { std::swap(x, y); r = r.inverse(); }
          int bits = succ[roleIdx.at(r.name())][x];
          tv = bits < 0 ? TvU : (((bits >> y) & 1) ? TvT : TvF);
          break;
        }
        case FKind::Distinct:
          tv = indivElem[indivIndex(f.subject)] !=
                       indivElem[indivIndex(f.object)]
                   ? TvT
                   : TvF;
          break;
        default:
          tv = TvF;  // NegRoleF/Equal never occur in input
      }
      acc = std::min(acc, tv);
      if (acc == TvF) return TvF;
    }
    for (ConceptId c : nkb.tboxConcepts)
      for (int x = 0; x < n; ++x) {
        acc = std::min(acc, eval(c, x));
        if (acc == TvF) return TvF;
      }
    return acc;
  }

  int indivIndex(Indiv a) const {
    for (size_t i = 0; i < indivs.size(); ++i)
      if (indivs[i] == a) return (int)i;
    throw std::runtime_error("oracle: unknown individual");
  }

  bool dfs() {
    if (!tick()) return false;
    TV tv = checkAll();
    if (tv == TvF) return false;
    // find first undecided successor set
    for (size_t ri = 0; ri < roleIds.size(); ++ri)
      for (int x = 0; x < n; ++x)
        if (succ[ri][x] < 0) {
          for (int bits = 0; bits < (1 << n); ++bits) {
            succ[ri][x] = bits;
            if (dfs()) return true;
            if (exhausted) { succ[ri][x] = -1; return false; }
          }
          succ[ri][x] = -1;
          return false;
        }
    return tv == TvT;
  }

  // Enumerates atom assignments: elements < fixed get arbitrary masks,
  // elements >= fixed get nondecreasing masks (they are interchangeable).
  bool enumAtoms(int pos, int fixed, uint8_t minMask) {
    if (pos == n) {
      for (auto& row : succ) std::fill(row.begin(), row.end(), -1);
      return dfs();
    }
    int masks = 1 << atomIds.size();
    uint8_t start = pos < fixed ? 0 : minMask;
    for (int m = start; m < masks; ++m) {
      atoms[pos] = (uint8_t)m;
      if (enumAtoms(pos + 1, fixed, pos < fixed ? minMask : (uint8_t)m))
        return true;
      if (exhausted) return false;
    }
    return false;
  }

  // Enumerates canonical individual->element mappings (restricted growth).
  bool enumIndivs(size_t i, int used) {
    if (i == indivs.size()) {
      // elements 0..used-1 carry individuals; the rest are interchangeable
      return enumAtoms(0, std::max(used, 0), 0);
    }
    int limit = std::min(used + 1, n);
    for (int e = 0; e < limit; ++e) {
      indivElem[i] = e;
      if (enumIndivs(i + 1, std::max(used, e + 1))) return true;
      if (exhausted) return false;
    }
    return false;
  }

  bool search(int domain) {
    n = domain;
    atoms.assign(n, 0);
    succ.assign(roleIds.size(), std::vector<int>(n, -1));
    indivElem.assign(std::max<size_t>(indivs.size(), 1), 0);
    if (indivs.empty()) return enumAtoms(0, 0, 0);
    return enumIndivs(0, 0);
  }
};

}  // namespace

OracleVerdict bruteForceSat(TermContext& ctx, const NormalizedKb& nkb,
                            int maxDomain, uint64_t budget) {
  Brute b(ctx, nkb, budget);
  for (int d = 1; d <= maxDomain; ++d) {
    if (b.search(d)) return OracleVerdict::Sat;
    if (b.exhausted) return OracleVerdict::Unknown;
  }
  return OracleVerdict::Unsat;
}

// ---------------------------------------------------------------------------
// independent semantic evaluator over a concrete interpretation

namespace {

struct Eval2 {
  TermContext& ctx;
  const Interpretation& interp;

  bool edge(Role r, int x, int y) const {
    if (r.inverted()) { std::swap(x, y); r = r.inverse(); }
    auto it = interp.roleExt.find(r.name());
    if (it == interp.roleExt.end()) return false;
    return it->second.count({x, y}) != 0;
  }

  bool holds(ConceptId c, int x) const {
    const ConceptNode& nd = ctx.node(c);
    switch (nd.kind) {
      case CKind::Top:
      case CKind::TopAnn: return true;
      case CKind::Bottom: return false;
      case CKind::Atom: {
        auto it = interp.atomExt.find(nd.name);
        return it != interp.atomExt.end() && it->second.count(x) != 0;
      }
      case CKind::NegAtom: {
        auto it = interp.atomExt.find(nd.name);
        return it == interp.atomExt.end() || it->second.count(x) == 0;
      }
      case CKind::And: return holds(nd.lhs, x) && holds(nd.rhs, x);
      case CKind::Or: return holds(nd.lhs, x) || holds(nd.rhs, x);
      case CKind::Exists:
        for (size_t y = 0; y < interp.domainSize; ++y)
          if (edge(nd.role, x, (int)y) && holds(nd.lhs, (int)y)) return true;
        return false;
      case CKind::Forall:
        for (size_t y = 0; y < interp.domainSize; ++y)
          if (edge(nd.role, x, (int)y) && !holds(nd.lhs, (int)y))
            return false;
        return true;
      case CKind::AtLeast:
      case CKind::AtMost: {
        uint64_t cnt = 0;
        for (size_t y = 0; y < interp.domainSize; ++y)
          if (edge(nd.role, x, (int)y) && holds(nd.lhs, (int)y)) ++cnt;
        return nd.kind == CKind::AtLeast ? cnt >= nd.num : cnt <= nd.num;
      }
      default:
        throw std::runtime_error("evaluator: unexpected concept kind");
    }
  }
};

}  // namespace

std::vector<std::string> semanticViolations(TermContext& ctx,
                                            const Interpretation& interp,
                                            const NormalizedKb& nkb) {
  std::vector<std::string> out;
  Eval2 ev{ctx, interp};

  auto elemOf = [&](Indiv a) -> int {
    auto it = interp.indivMap.find(a);
    if (it == interp.indivMap.end()) return -1;
    return it->second;
  };

  for (const Formula& f : nkb.kb.abox) {
    bool ok = true;
    switch (f.kind) {
      case FKind::ConceptF: {
        int x = elemOf(f.subject);
        ok = x >= 0 && ev.holds(f.conceptId, x);
        break;
      }
      case FKind::RoleF: {
        int x = elemOf(f.subject), y = elemOf(f.object);
        ok = x >= 0 && y >= 0 && ev.edge(f.role, x, y);
        break;
      }
      case FKind::Distinct:
        ok = elemOf(f.subject) != elemOf(f.object);
        break;
      default:
        ok = false;
    }
    if (!ok) out.push_back("ABox: " + formulaToString(ctx, f));
  }
  for (ConceptId c : nkb.tboxConcepts)
    for (size_t x = 0; x < interp.domainSize; ++x)
      if (!ev.holds(c, (int)x))
        out.push_back("TBox concept " + ctx.conceptToString(c) +
                      " fails at element " + std::to_string(x));
  for (const auto& ax : nkb.kb.roleAxioms) {
    for (size_t x = 0; x < interp.domainSize; ++x)
      for (size_t y = 0; y < interp.domainSize; ++y)
        if (ev.edge(ax.sub, (int)x, (int)y) &&
            !ev.edge(ax.sup, (int)x, (int)y))
          out.push_back("role axiom violated: " +
                        ctx.roleToString(ax.sub) + " sub " +
                        ctx.roleToString(ax.sup));
  }
  for (const auto& ax : nkb.kb.transAxioms) {
    for (size_t x = 0; x < interp.domainSize; ++x)
      for (size_t y = 0; y < interp.domainSize; ++y)
        for (size_t z = 0; z < interp.domainSize; ++z)
          if (ev.edge(ax.role, (int)x, (int)y) &&
              ev.edge(ax.role, (int)y, (int)z) &&
              !ev.edge(ax.role, (int)x, (int)z))
            out.push_back("transitivity violated: " +
                          ctx.roleToString(ax.role));
  }
  return out;
}

// ---------------------------------------------------------------------------
// random KB generators

namespace {

int pick(std::mt19937_64& rng, int n) {
  return (int)(rng() % (uint64_t)n);
}

// `qroles` are the roles allowed under number restrictions (must stay simple
// with respect to the generated RBox).
std::string randConcept(std::mt19937_64& rng, int depth,
                        const std::vector<std::string>& atoms,
                        const std::vector<std::string>& roles,
                        const std::vector<std::string>& qroles) {
  int choice = depth == 0 ? pick(rng, 2) : pick(rng, 8);
  switch (choice) {
    case 0: return atoms[pick(rng, (int)atoms.size())];
    case 1: return "not " + atoms[pick(rng, (int)atoms.size())];
    case 2:
      return "(" + randConcept(rng, depth - 1, atoms, roles, qroles) +
             " and " + randConcept(rng, depth - 1, atoms, roles, qroles) +
             ")";
    case 3:
      return "(" + randConcept(rng, depth - 1, atoms, roles, qroles) +
             " or " + randConcept(rng, depth - 1, atoms, roles, qroles) + ")";
    case 4:
      return "some " + roles[pick(rng, (int)roles.size())] + " . " +
             randConcept(rng, depth - 1, atoms, roles, qroles);
    case 5:
      return "all " + roles[pick(rng, (int)roles.size())] + " . " +
             randConcept(rng, depth - 1, atoms, roles, qroles);
    case 6:
      return ">= " + std::to_string(1 + pick(rng, 3)) + " " +
             qroles[pick(rng, (int)qroles.size())] + " . " +
             randConcept(rng, depth - 1, atoms, roles, qroles);
    default:
      return "<= " + std::to_string(pick(rng, 4)) + " " +
             qroles[pick(rng, (int)qroles.size())] + " . " +
             randConcept(rng, depth - 1, atoms, roles, qroles);
  }
}

}  // namespace

std::string randomAlcqKb(std::mt19937_64& rng) {
  std::vector<std::string> atoms = {"A", "B", "C"};
  std::vector<std::string> roles = {"r", "s"};
  std::ostringstream out;
  int nTbox = pick(rng, 2);
  for (int i = 0; i < nTbox; ++i)
    out << "(" << randConcept(rng, 1, atoms, roles, roles) << ") sub ("
        << randConcept(rng, 1, atoms, roles, roles) << ");\n";
  int nAbox = 2 + pick(rng, 3);
  for (int i = 0; i < nAbox; ++i) {
    switch (pick(rng, 5)) {
      case 0:
        out << "assert " << (pick(rng, 2) ? "a" : "b") << " : "
            << randConcept(rng, 2, atoms, roles, roles) << ";\n";
        break;
      case 1:
        out << "assert " << roles[pick(rng, (int)roles.size())] << "(a, b);\n";
        break;
      case 2:
        out << "assert a != b;\n";
        break;
      default:
        out << "assert a : " << randConcept(rng, 2, atoms, roles, roles) << ";\n";
        break;
    }
  }
  return out.str();
}

std::string randomShiqKb(std::mt19937_64& rng) {
  // p and q stay simple: nothing transitive lies below them.
  std::vector<std::string> atoms = {"A", "B", "C", "D"};
  std::vector<std::string> allRoles = {"r", "s", "p", "q", "inv(r)", "inv(p)"};
  std::vector<std::string> simple = {"p", "q", "inv(p)", "inv(q)"};
  std::ostringstream out;
  if (pick(rng, 2)) out << "trans(s);\n";
  if (pick(rng, 2)) out << "r sub s;\n";
  if (pick(rng, 2)) out << "inv(r) sub s;\n";
  if (pick(rng, 2)) out << "p sub r;\n";
  int nTbox = pick(rng, 3);
  for (int i = 0; i < nTbox; ++i) {
    std::string lhs = randConcept(rng, 1, atoms, allRoles, simple);
    std::string rhs = randConcept(rng, 1, atoms, allRoles, simple);
    out << "(" << lhs << ") " << (pick(rng, 4) ? "sub" : "equiv") << " ("
        << rhs << ");\n";
  }
  int nAbox = 1 + pick(rng, 4);
  std::vector<std::string> indivs = {"a", "b", "c"};
  for (int i = 0; i < nAbox; ++i) {
    switch (pick(rng, 4)) {
      case 0:
        out << "assert " << allRoles[pick(rng, (int)allRoles.size())] << "("
            << indivs[pick(rng, 3)] << ", " << indivs[pick(rng, 3)] << ");\n";
        break;
      case 1:
        out << "assert " << indivs[pick(rng, 3)] << " != "
            << indivs[pick(rng, 3)] << ";\n";
        break;
      default: {
        // number restrictions only over simple roles
        std::string c = randConcept(rng, 2, atoms, allRoles, simple);
        if (pick(rng, 3) == 0)
          c = ">= " + std::to_string(1 + pick(rng, 3)) + " " +
              simple[pick(rng, (int)simple.size())] + " . " +
              randConcept(rng, 1, atoms, allRoles, simple);
        out << "assert " << indivs[pick(rng, 3)] << " : " << c << ";\n";
        break;
      }
    }
  }
  return out.str();
}

}  // namespace support
