#include "shiq/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace shiq {

bool VerifyReport::ok() const {
  for (const CheckResult& c : checks)
    if (c.status == CheckStatus::Fail) return false;
  return true;
}

bool VerifyReport::definite() const {
  for (const CheckResult& c : checks)
    if (c.status != CheckStatus::Pass) return false;
  return true;
}

std::vector<char> settledNodes(const Tableau& t) {
  // Greatest fixpoint of the nodes a model can be read off from. The run
  // stops as soon as the initial node settles, so the graph may hold
  // unexpanded or abandoned regions; those must never be entered. A node
  // stays settled while it keeps a witness: a non-state needs a settled
  // successor, a state needs all testing successors settled and a feasible
  // constraint system once the unsettled feasibility successors are pinned
  // to zero. Open nodes always survive, because openness was derived from
  // exactly these conditions.
  std::vector<char> in(t.nodeCount(), 0);
  for (NodeId v = 0; v < t.nodeCount(); ++v) {
    NodeStatus s = t.node(v).status;
    in[v] = s == NodeStatus::Open || s == NodeStatus::FExpanded;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId v = 0; v < t.nodeCount(); ++v) {
      if (!in[v]) continue;
      const Node& n = t.node(v);
      bool ok = true;
      if (n.type == NodeType::NonState) {
        ok = false;
        for (NodeId w : n.succs)
          if (in[w]) {
            ok = true;
            break;
          }
      } else {
        std::set<int> pins;
        for (NodeId w : n.succs) {
          const Node& c = t.node(w);
          if (!c.ceLabel || in[w]) continue;
          if (c.ceLabel->type == CEType::TestingClosedness) {
            ok = false;
            break;
          }
          auto it = n.ilpVarOf.find(w);
          if (it != n.ilpVarOf.end()) pins.insert(it->second);
        }
        if (ok && !isFeasible(t.ilpProblem(n, pins))) ok = false;
      }
      if (!ok) {
        in[v] = 0;
        changed = true;
      }
    }
  }
  return in;
}

std::vector<NodeId> saturationPath(const Tableau& t, NodeId v,
                                   const std::vector<char>& settled) {
  if (t.node(v).type != NodeType::NonState || !settled[v])
    throw KbError("saturationPath: starting node must be a settled "
                  "non-state");
  // Depth-first search through settled nodes, preferring the lowest-id
  // successor; backtracks when a branch dead-ends.
  std::vector<NodeId> path;
  std::set<NodeId> onPath;
  std::function<bool(NodeId)> go = [&](NodeId u) -> bool {
    const Node& n = t.node(u);
    if (n.type == NodeType::State) return settled[u];
    if (!settled[u]) return false;
    if (!onPath.insert(u).second) return false;
    path.push_back(u);
    std::vector<NodeId> succs = n.succs;
    std::sort(succs.begin(), succs.end());
    for (NodeId w : succs) {
      if (go(w)) {
        if (t.node(w).type == NodeType::State) path.push_back(w);
        return true;
      }
    }
    path.pop_back();
    onPath.erase(u);
    return false;
  };
  if (!go(v))
    throw KbError("saturationPath: no saturation path from node " +
                  std::to_string(v) + " (tableau invariant violated)");
  return path;
}

std::vector<NodeId> saturationPath(const Tableau& t, NodeId v) {
  return saturationPath(t, v, settledNodes(t));
}

namespace {

// Concepts asserted about `subject` in the full label of a node.
std::set<ConceptId> conceptsAbout(const FormulaSet& fl, Indiv subject) {
  std::set<ConceptId> out;
  for (const Formula& f : fl)
    if (f.kind == FKind::ConceptF && f.subject == subject)
      out.insert(f.conceptId);
  return out;
}

}  // namespace

ModelGraph extractModel(const Tableau& t, const ModelOptions& opts) {
  if (t.node(t.root()).status == NodeStatus::Closed)
    throw KbError("extractModel: initial node is closed");

  std::vector<char> settled = settledNodes(t);
  std::vector<NodeId> base = saturationPath(t, t.root(), settled);
  NodeId vk = base.back();
  FormulaSet flk = t.fullLabel(vk);

  ModelGraph m;
  // Base elements: the individuals occurring in the terminal complex state.
  std::map<Indiv, int> elemOf;
  auto addIndiv = [&](Indiv a) {
    if (a == kNoIndiv || elemOf.count(a)) return;
    int e = static_cast<int>(m.concepts.size());
    elemOf[a] = e;
    m.concepts.emplace_back();
  };
  for (const Formula& f : t.node(vk).label) {
    if (f.subject != kNoIndiv && f.kind != FKind::ConceptF) addIndiv(f.subject);
    if (f.kind == FKind::ConceptF && f.subject != kNoIndiv) addIndiv(f.subject);
    if (f.object != kNoIndiv) addIndiv(f.object);
  }
  if (elemOf.empty()) {
    // Degenerate: no named individuals survived (cannot happen for normalized
    // KBs, which always have at least one ABox individual).
    throw KbError("extractModel: terminal state has no individuals");
  }
  m.indivMap = elemOf;
  // Merged individuals recorded as equalities map to their representative.
  for (const Formula& f : t.node(vk).rfmls)
    if (f.kind == FKind::Equal && elemOf.count(f.subject) &&
        !elemOf.count(f.object))
      m.indivMap[f.object] = elemOf[f.subject];

  for (auto& [a, e] : elemOf) m.concepts[e] = conceptsAbout(flk, a);
  for (const Formula& f : flk)
    if (f.kind == FKind::RoleF)
      m.edges[f.role].insert({elemOf.at(f.subject), elemOf.at(f.object)});

  // Resolve elements breadth-first, cloning tableau successors.
  struct Pending {
    int elem;
    NodeId stateOf;   // the state whose successors realize this element
    Indiv filter;     // restrict to CELabelI == filter (base elements only)
    uint64_t depth;
  };
  std::deque<Pending> queue;
  for (auto& [a, e] : elemOf) queue.push_back({e, vk, a, 0});

  std::map<NodeId, std::vector<uint64_t>> solutionCache;
  auto solutionFor = [&](NodeId u) -> const std::vector<uint64_t>& {
    auto it = solutionCache.find(u);
    if (it != solutionCache.end()) return it->second;
    // Pin the unsettled feasibility successors: the solution must only use
    // successors a model can be read off from.
    const Node& nu = t.node(u);
    std::set<int> pins;
    for (NodeId w : nu.succs) {
      const Node& c = t.node(w);
      if (!c.ceLabel || settled[w] ||
          c.ceLabel->type != CEType::CheckingFeasibility)
        continue;
      auto pit = nu.ilpVarOf.find(w);
      if (pit != nu.ilpVarOf.end()) pins.insert(pit->second);
    }
    auto sol = findSolution(t.ilpProblem(nu, pins));
    if (!sol)
      throw KbError("extractModel: infeasible constraints at a non-closed "
                    "state (tableau invariant violated)");
    return solutionCache.emplace(u, std::move(*sol)).first->second;
  };

  bool truncated = false;
  while (!queue.empty()) {
    Pending p = queue.front();
    queue.pop_front();
    const Node& u = t.node(p.stateOf);
    for (NodeId w0 : u.succs) {
      const Node& w = t.node(w0);
      if (!w.ceLabel) continue;
      if (p.filter != kNoIndiv && w.ceLabel->indiv != p.filter) continue;
      uint64_t count = 1;
      if (w.ceLabel->type == CEType::CheckingFeasibility) {
        auto it = u.ilpVarOf.find(w0);
        count = it == u.ilpVarOf.end()
                    ? 0
                    : solutionFor(p.stateOf)[static_cast<size_t>(it->second)];
      }
      if (count == 0) continue;
      std::vector<NodeId> path = saturationPath(t, w0, settled);
      NodeId wh = path.back();
      std::set<ConceptId> cs;
      for (const Formula& f : t.fullLabel(wh))
        if (f.kind == FKind::ConceptF) cs.insert(f.conceptId);
      for (uint64_t i = 0; i < count; ++i) {
        if (m.concepts.size() >= opts.maxElements) {
          truncated = true;
          break;
        }
        int z = static_cast<int>(m.concepts.size());
        m.concepts.push_back(cs);
        for (Role r : w.ceLabel->roles) {
          m.edges[r].insert({p.elem, z});
          m.edges[r.inverse()].insert({z, p.elem});
        }
        if (p.depth + 1 >= opts.depthCap) {
          m.frontier.insert(z);
        } else {
          queue.push_back({z, wh, kNoIndiv, p.depth + 1});
        }
      }
      if (truncated) break;
    }
    if (truncated) {
      m.frontier.insert(p.elem);  // the element budget cut this subtree short
      for (const Pending& q : queue) m.frontier.insert(q.elem);
      break;
    }
  }
  m.domainSize = m.concepts.size();
  return m;
}

std::vector<std::string> saturationViolations(TermContext& ctx,
                                              const ModelGraph& m,
                                              const RBoxClosure& rc) {
  std::vector<std::string> out;
  auto report = [&](int x, const std::string& what) {
    out.push_back("element " + std::to_string(x) + ": " + what);
  };
  auto edgeSet = [&](Role r) -> const std::set<std::pair<int, int>>& {
    static const std::set<std::pair<int, int>> empty;
    auto it = m.edges.find(r);
    return it == m.edges.end() ? empty : it->second;
  };
  auto succsOf = [&](int x, Role r) {
    std::vector<int> ys;
    for (auto& [a, b] : edgeSet(r))
      if (a == x) ys.push_back(b);
    return ys;
  };

  // Edge conditions hold globally.
  for (auto& [r, pairs] : m.edges) {
    for (auto& [a, b] : pairs) {
      if (!edgeSet(r.inverse()).count({b, a}))
        report(a, "missing inverse " + ctx.roleToString(r.inverse()) +
                      " edge to " + std::to_string(b));
      for (Role s : rc.superRoles(r))
        if (s != r && !edgeSet(s).count({a, b}))
          report(a, "edge not closed under subrole " + ctx.roleToString(s));
    }
  }

  for (int x = 0; x < static_cast<int>(m.domainSize); ++x) {
    if (m.frontier.count(x)) continue;
    const std::set<ConceptId>& cs = m.concepts[x];
    for (ConceptId c : cs) {
      const ConceptNode& n = ctx.node(c);
      if (n.kind == CKind::Bottom) report(x, "contains bottom");
      if (cs.count(ctx.complement(c)))
        report(x, "contains complementary pair " + ctx.conceptToString(c));
      switch (n.kind) {
        case CKind::And:
          if (!cs.count(n.lhs) || !cs.count(n.rhs))
            report(x, "conjunction not decomposed: " + ctx.conceptToString(c));
          break;
        case CKind::Or:
          if (!cs.count(n.lhs) && !cs.count(n.rhs))
            report(x, "disjunction unrealized: " + ctx.conceptToString(c));
          break;
        case CKind::Forall: {
          for (Role r : rc.roles)
            if (r != n.role && rc.subsumedBy(r, n.role) &&
                !cs.count(ctx.forall(r, n.lhs)))
              report(x, "universal not pushed to subrole " +
                            ctx.roleToString(r));
          for (int y : succsOf(x, n.role)) {
            if (!m.concepts[y].count(n.lhs))
              report(x, "universal " + ctx.conceptToString(c) +
                            " violated at successor " + std::to_string(y));
            if (rc.isTransitive(n.role) && !m.concepts[y].count(c))
              report(x, "transitive universal not propagated to " +
                            std::to_string(y));
          }
          break;
        }
        case CKind::Exists: {
          bool found = false;
          for (int y : succsOf(x, n.role))
            if (m.concepts[y].count(n.lhs)) found = true;
          if (!found)
            report(x, "existential unwitnessed: " + ctx.conceptToString(c));
          break;
        }
        case CKind::AtLeast:
        case CKind::AtMost: {
          uint64_t cnt = 0;
          for (int y : succsOf(x, n.role)) {
            if (m.concepts[y].count(n.lhs)) ++cnt;
            if (n.kind == CKind::AtMost && !m.concepts[y].count(n.lhs) &&
                !m.concepts[y].count(ctx.complement(n.lhs)))
              report(x, "choose-condition violated at successor " +
                            std::to_string(y));
          }
          if (n.kind == CKind::AtLeast && cnt < n.num)
            report(x, "at-least unrealized: " + ctx.conceptToString(c));
          if (n.kind == CKind::AtMost && cnt > n.num)
            report(x, "at-most exceeded: " + ctx.conceptToString(c));
          break;
        }
        default:
          break;
      }
    }
  }
  return out;
}

Interpretation correspondingModel(TermContext& ctx, const ModelGraph& m,
                                  const RBoxClosure& rc) {
  (void)ctx;
  std::map<Role, std::set<std::pair<int, int>>> ep = m.edges;
  for (Role r : rc.roles) ep[r];  // ensure every role has an entry
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [r, pairs] : ep) {
      // keep each role and its inverse in lockstep
      for (auto& [a, b] : pairs)
        if (ep[r.inverse()].insert({b, a}).second) changed = true;
      for (Role s : rc.superRoles(r)) {
        if (s == r) continue;
        for (auto& pr : pairs)
          if (ep[s].insert(pr).second) changed = true;
      }
      if (rc.isTransitive(r)) {
        std::vector<std::pair<int, int>> add;
        for (auto& [a, b] : pairs)
          for (auto& [c, d] : pairs)
            if (b == c && !pairs.count({a, d})) add.push_back({a, d});
        if (!add.empty()) {
          changed = true;
          pairs.insert(add.begin(), add.end());
        }
      }
    }
  }

  Interpretation out;
  out.domainSize = m.domainSize;
  out.indivMap = m.indivMap;
  out.frontier = m.frontier;
  for (size_t x = 0; x < m.concepts.size(); ++x)
    for (ConceptId c : m.concepts[x]) {
      const ConceptNode& n = ctx.node(c);
      if (n.kind == CKind::Atom) out.atomExt[n.name].insert(static_cast<int>(x));
    }
  for (auto& [r, pairs] : ep)
    if (!r.inverted() && !pairs.empty()) out.roleExt[r.name()] = pairs;
  return out;
}

namespace {

// Three-valued concept evaluation; Unknown arises only from truncated
// (frontier) elements.
struct Evaluator {
  TermContext& ctx;
  const Interpretation& i;

  std::map<std::pair<int, ConceptId>, CheckStatus> memo;

  std::set<std::pair<int, int>> pairsOf(Role r) const {
    auto it = i.roleExt.find(r.name());
    if (it == i.roleExt.end()) return {};
    if (!r.inverted()) return it->second;
    std::set<std::pair<int, int>> inv;
    for (auto& [a, b] : it->second) inv.insert({b, a});
    return inv;
  }

  std::vector<int> succs(int x, Role r) const {
    std::vector<int> out;
    for (auto& [a, b] : pairsOf(r))
      if (a == x) out.push_back(b);
    return out;
  }

  CheckStatus eval(int x, ConceptId c) {
    auto key = std::make_pair(x, c);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = CheckStatus::Unknown;  // cycle-safe placeholder
    CheckStatus r = evalRaw(x, c);
    memo[key] = r;
    return r;
  }

  CheckStatus evalRaw(int x, ConceptId c) {
    const ConceptNode& n = ctx.node(c);
    bool atFrontier = i.frontier.count(x) != 0;
    switch (n.kind) {
      case CKind::Top:
      case CKind::TopAnn:
        return CheckStatus::Pass;
      case CKind::Bottom:
        return CheckStatus::Fail;
      case CKind::Atom: {
        auto it = i.atomExt.find(n.name);
        bool in = it != i.atomExt.end() && it->second.count(x);
        return in ? CheckStatus::Pass : CheckStatus::Fail;
      }
      case CKind::NegAtom: {
        auto it = i.atomExt.find(n.name);
        bool in = it != i.atomExt.end() && it->second.count(x);
        return in ? CheckStatus::Fail : CheckStatus::Pass;
      }
      case CKind::Not: {
        CheckStatus s = eval(x, n.lhs);
        if (s == CheckStatus::Pass) return CheckStatus::Fail;
        if (s == CheckStatus::Fail) return CheckStatus::Pass;
        return CheckStatus::Unknown;
      }
      case CKind::And: {
        CheckStatus a = eval(x, n.lhs), b = eval(x, n.rhs);
        if (a == CheckStatus::Fail || b == CheckStatus::Fail)
          return CheckStatus::Fail;
        if (a == CheckStatus::Unknown || b == CheckStatus::Unknown)
          return CheckStatus::Unknown;
        return CheckStatus::Pass;
      }
      case CKind::Or: {
        CheckStatus a = eval(x, n.lhs), b = eval(x, n.rhs);
        if (a == CheckStatus::Pass || b == CheckStatus::Pass)
          return CheckStatus::Pass;
        if (a == CheckStatus::Unknown || b == CheckStatus::Unknown)
          return CheckStatus::Unknown;
        return CheckStatus::Fail;
      }
      case CKind::Exists: {
        bool unknown = atFrontier;
        for (int y : succs(x, n.role)) {
          CheckStatus s = eval(y, n.lhs);
          if (s == CheckStatus::Pass) return CheckStatus::Pass;
          if (s == CheckStatus::Unknown) unknown = true;
        }
        return unknown ? CheckStatus::Unknown : CheckStatus::Fail;
      }
      case CKind::Forall: {
        bool unknown = atFrontier;
        for (int y : succs(x, n.role)) {
          CheckStatus s = eval(y, n.lhs);
          if (s == CheckStatus::Fail) return CheckStatus::Fail;
          if (s == CheckStatus::Unknown) unknown = true;
        }
        return unknown ? CheckStatus::Unknown : CheckStatus::Pass;
      }
      case CKind::AtLeast:
      case CKind::AtMost: {
        uint64_t definite = 0, possible = 0;
        for (int y : succs(x, n.role)) {
          CheckStatus s = eval(y, n.lhs);
          if (s == CheckStatus::Pass) ++definite;
          if (s != CheckStatus::Fail) ++possible;
        }
        if (n.kind == CKind::AtLeast) {
          if (definite >= n.num) return CheckStatus::Pass;
          if (atFrontier || possible >= n.num) return CheckStatus::Unknown;
          return CheckStatus::Fail;
        }
        if (definite > n.num) return CheckStatus::Fail;
        if (atFrontier || possible > n.num) return CheckStatus::Unknown;
        return CheckStatus::Pass;
      }
      case CKind::MinPend:
      case CKind::MaxPend:
        throw KbError("evaluating a pending constructor in a model");
    }
    return CheckStatus::Unknown;
  }
};

const char* statusWord(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Unknown: return "unknown";
  }
  return "?";
}

}  // namespace

VerifyReport verifyModel(TermContext& ctx, const Interpretation& i,
                         const NormalizedKb& nkb) {
  VerifyReport rep;
  Evaluator ev{ctx, i, {}};
  auto elemOf = [&](Indiv a) -> int {
    auto it = i.indivMap.find(a);
    if (it == i.indivMap.end())
      throw KbError("verifyModel: individual missing from interpretation");
    return it->second;
  };
  auto downgrade = [&](CheckStatus s, int x) {
    // Failures caused by truncated elements are inconclusive, not real.
    return s == CheckStatus::Fail && i.frontier.count(x) ? CheckStatus::Unknown
                                                         : s;
  };

  for (const Formula& f : nkb.kb.abox) {
    CheckResult c;
    c.description = "ABox: " + formulaToString(ctx, f);
    switch (f.kind) {
      case FKind::ConceptF:
        c.status = downgrade(ev.eval(elemOf(f.subject), f.conceptId),
                             elemOf(f.subject));
        break;
      case FKind::RoleF:
        c.status = ev.pairsOf(f.role).count(
                       {elemOf(f.subject), elemOf(f.object)})
                       ? CheckStatus::Pass
                       : CheckStatus::Fail;
        break;
      case FKind::Distinct:
        c.status = elemOf(f.subject) != elemOf(f.object) ? CheckStatus::Pass
                                                         : CheckStatus::Fail;
        break;
      default:
        c.status = CheckStatus::Fail;
    }
    rep.checks.push_back(std::move(c));
  }

  for (ConceptId t : nkb.tboxConcepts) {
    size_t fails = 0, unknowns = 0;
    for (int x = 0; x < static_cast<int>(i.domainSize); ++x) {
      CheckStatus s = downgrade(ev.eval(x, t), x);
      if (s == CheckStatus::Fail) ++fails;
      if (s == CheckStatus::Unknown) ++unknowns;
    }
    CheckResult c;
    c.description = "TBox: " + ctx.conceptToString(t);
    c.status = fails ? CheckStatus::Fail
                     : (unknowns ? CheckStatus::Unknown : CheckStatus::Pass);
    if (fails)
      c.description += " (" + std::to_string(fails) + " elements fail)";
    rep.checks.push_back(std::move(c));
  }

  for (const RoleAxiom& ax : nkb.kb.roleAxioms) {
    CheckResult c;
    c.description = "RBox: " + ctx.roleToString(ax.sub) + " sub " +
                    ctx.roleToString(ax.sup);
    c.status = CheckStatus::Pass;
    auto sup = ev.pairsOf(ax.sup);
    for (auto& pr : ev.pairsOf(ax.sub))
      if (!sup.count(pr)) c.status = CheckStatus::Fail;
    rep.checks.push_back(std::move(c));
  }
  for (const TransAxiom& ax : nkb.kb.transAxioms) {
    CheckResult c;
    c.description = "RBox: trans " + ctx.roleToString(ax.role);
    c.status = CheckStatus::Pass;
    auto pairs = ev.pairsOf(ax.role);
    for (auto& [a, b] : pairs)
      for (auto& [b2, d] : pairs)
        if (b == b2 && !pairs.count({a, d})) c.status = CheckStatus::Fail;
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

void writeModel(std::ostream& os, const TermContext& ctx,
                const Interpretation& i) {
  os << "# model: " << i.domainSize << " elements\n";
  for (size_t x = 0; x < i.domainSize; ++x) os << "element " << x << "\n";
  if (!i.frontier.empty()) {
    os << "# frontier:";
    for (int x : i.frontier) os << " " << x;
    os << "\n";
  }
  for (auto& [a, e] : i.indivMap)
    os << "individual " << ctx.individuals().name(a) << " = " << e << "\n";
  for (auto& [name, ext] : i.atomExt) {
    os << "concept " << ctx.conceptNames().name(name) << ":";
    for (int x : ext) os << " " << x;
    os << "\n";
  }
  for (auto& [name, pairs] : i.roleExt) {
    os << "role " << ctx.roleNames().name(name) << ":";
    for (auto& [a, b] : pairs) os << " (" << a << "," << b << ")";
    os << "\n";
  }
}

std::string checkStatusWord(CheckStatus s) { return statusWord(s); }

}  // namespace shiq
