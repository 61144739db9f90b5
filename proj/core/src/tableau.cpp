#include "shiq/tableau.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace shiq {

namespace {

int statusRank(NodeStatus s) {
  switch (s) {
    case NodeStatus::Unexpanded: return 0;
    case NodeStatus::PExpanded: return 1;
    case NodeStatus::FExpanded: return 2;
    default: return 3;
  }
}

const char* statusName(NodeStatus s) {
  switch (s) {
    case NodeStatus::Unexpanded: return "unexpanded";
    case NodeStatus::PExpanded: return "p-expanded";
    case NodeStatus::FExpanded: return "f-expanded";
    case NodeStatus::Incomplete: return "incomplete";
    case NodeStatus::Closed: return "closed";
    case NodeStatus::Open: return "open";
  }
  return "?";
}

// True when `need` of the given witnesses can be chosen pairwise adjacent in
// the (symmetric) adjacency relation.  Witness counts are tiny, so a plain
// branch-and-bound clique search suffices.
bool hasClique(const std::vector<std::vector<char>>& adj, size_t need) {
  size_t n = adj.size();
  if (need == 0) return true;
  if (need > n) return false;
  std::vector<size_t> clique;
  std::function<bool(size_t)> go = [&](size_t start) -> bool {
    if (clique.size() == need) return true;
    if (clique.size() + (n - start) < need) return false;
    for (size_t i = start; i < n; ++i) {
      bool ok = true;
      for (size_t c : clique)
        if (!adj[c][i]) { ok = false; break; }
      if (!ok) continue;
      clique.push_back(i);
      if (go(i + 1)) return true;
      clique.pop_back();
    }
    return false;
  };
  return go(0);
}

}  // namespace

Tableau::Tableau(TermContext& ctx, const NormalizedKb& nkb, TableauOptions opts)
    : ctx_(ctx), nkb_(nkb), opts_(opts), rng_(opts.seed ? *opts.seed : 0) {
  // Initial node: the ABox plus every internalized TBox concept asserted for
  // every occurring individual.
  FormulaSet label;
  for (const Formula& f : nkb_.kb.abox) label.insert(f);
  for (ConceptId c : nkb_.tboxConcepts)
    for (Indiv a : nkb_.individuals) label.insert(Formula::conceptAt(a, c));

  Node n;
  n.id = 0;
  n.type = NodeType::NonState;
  n.stype = NodeSType::Complex;
  n.label = std::move(label);
  n.labelHash = n.label.fingerprint();
  n.statePred = kNullNode;
  n.atPred = 0;
  n.statusHistory.push_back(n.status);
  nodes_.push_back(std::move(n));
  root_ = 0;
  localMembers_[0].push_back(0);
  stats_.nodesCreated++;
  markDirty(0);
}

std::string Tableau::nodeName(NodeId v) const { return "v" + std::to_string(v); }

void Tableau::trace(const std::string& line) {
  if (opts_.trace) *opts_.trace << line << "\n";
}

void Tableau::markDirty(NodeId v) {
  Node& n = mut(v);
  n.usSaturated = false;
  if (n.type == NodeType::NonState && n.status == NodeStatus::Unexpanded &&
      !n.usQueued) {
    n.usQueued = true;
    usQueue_.push_back(v);
  }
  markKcc(v);
  if (n.dirty) return;
  n.dirty = true;
  dirtyQueue_.push_back(v);
}

void Tableau::markKcc(NodeId v) {
  NodeId s = nodes_[v].type == NodeType::State ? v : nodes_[v].statePred;
  if (s == kNullNode || nodes_[s].kccQueued) return;
  mut(s).kccQueued = true;
  kccQueue_.push_back(s);
}

void Tableau::enqueueStatus(NodeId v) {
  if (nodes_[v].queued) return;
  nodes_[v].queued = true;
  statusQueue_.push_back(v);
}

FormulaSet Tableau::fullLabel(NodeId v) const {
  const Node& n = nodes_[v];
  FormulaSet fl = n.label;
  fl.unionWith(n.rfmls);
  std::vector<Formula> kept;
  kept.reserve(fl.size());
  for (const Formula& f : fl)
    if (f.kind != FKind::ConceptF || !ctx_.isPending(f.conceptId))
      kept.push_back(f);
  return FormulaSet(std::move(kept));
}

void Tableau::setStatus(NodeId v, NodeStatus s) {
  Node& n = mut(v);
  if (n.status == s) return;
  if (isFinal(n.status) || statusRank(s) <= statusRank(n.status))
    throw std::logic_error("illegal status transition on " + nodeName(v) +
                           ": " + statusName(n.status) + " -> " +
                           statusName(s));
  n.status = s;
  n.statusHistory.push_back(s);
  trace("status: " + nodeName(v) + " := " + statusName(s));
  markKcc(v);
  if (s == NodeStatus::Incomplete && n.type == NodeType::State)
    kcc1Queue_.push_back(v);
  if (s == NodeStatus::Closed && n.afterTrans() && n.ceLabel &&
      n.ceLabel->type == CEType::CheckingFeasibility) {
    addPin(n.statePred, v);
  }
  if (s == NodeStatus::Closed || s == NodeStatus::Open) {
    for (NodeId p : n.preds)
      if (!isFinal(nodes_[p].status)) enqueueStatus(p);
  }
}

void Tableau::addPin(NodeId state, NodeId succ) {
  Node& u = mut(state);
  auto it = u.ilpVarOf.find(succ);
  if (it == u.ilpVarOf.end()) return;  // state not yet fully expanded
  if (!u.ilpPins.insert(it->second).second) return;
  trace("pin: x(" + nodeName(succ) + ") = 0 at " + nodeName(state));
  if (!isFinal(u.status)) {
    markDirty(state);
    enqueueStatus(state);
  }
}

void Tableau::addEdge(NodeId v, NodeId w) {
  Node& n = mut(v);
  if (std::find(n.succs.begin(), n.succs.end(), w) != n.succs.end()) return;
  n.succs.push_back(w);
  mut(w).preds.push_back(v);
  if (isFinal(nodes_[w].status) && !isFinal(n.status)) enqueueStatus(v);
  if (nodes_[w].status == NodeStatus::Incomplete &&
      nodes_[w].type == NodeType::State)
    kcc1Queue_.push_back(w);  // the new predecessor must be re-expanded
}

void Tableau::removeEdge(NodeId u, NodeId v) {
  epoch_++;
  auto& ss = mut(u).succs;
  ss.erase(std::remove(ss.begin(), ss.end(), v), ss.end());
  auto& ps = mut(v).preds;
  ps.erase(std::remove(ps.begin(), ps.end(), u), ps.end());
}

void Tableau::noteLocalExpansion(NodeId v) {
  NodeId s = nodes_[v].statePred;
  if (s != kNullNode) mut(s).localOnlyUS = false;
}

NodeId Tableau::newSucc(NodeId v, NodeType type, NodeSType stype,
                        FormulaSet label, FormulaSet rfmls,
                        std::optional<CELabel> ce) {
  NodeId id = static_cast<NodeId>(nodes_.size());
  Node n;
  n.id = id;
  n.type = type;
  n.stype = stype;
  n.label = std::move(label);
  n.rfmls = std::move(rfmls);
  n.labelHash = n.label.fingerprint();
  const Node& p = nodes_[v];
  if (p.type == NodeType::State) {
    n.ceLabel = std::move(ce);
    n.statePred = v;
    n.atPred = (type == NodeType::NonState) ? id : kNullNode;
  } else {
    n.statePred = (type == NodeType::NonState) ? p.statePred : kNullNode;
    n.atPred = (type == NodeType::NonState) ? p.atPred : kNullNode;
  }
  n.statusHistory.push_back(n.status);
  nodes_.push_back(std::move(n));
  if (type == NodeType::State)
    stateIndex_[nodes_[id].labelHash].push_back(id);
  else
    localMembers_[nodes_[id].atPred].push_back(id);
  addEdge(v, id);
  stats_.nodesCreated++;
  markDirty(id);
  candBatch_.push_back(id);
  trace("new: " + nodeName(id) + (type == NodeType::State ? " state " : " ") +
        "<- " + nodeName(v) + " label " +
        setToString(ctx_, nodes_[id].label));
  return id;
}

NodeId Tableau::findProxy(NodeType type, NodeSType stype, NodeId v1,
                          const FormulaSet& label) const {
  uint64_t fp = label.fingerprint();
  if (type == NodeType::State) {
    auto it = stateIndex_.find(fp);
    if (it == stateIndex_.end()) return kNullNode;
    for (NodeId w : it->second)
      if (nodes_[w].stype == stype && nodes_[w].label == label) return w;
    return kNullNode;
  }
  auto it = localMembers_.find(v1);
  if (it == localMembers_.end()) return kNullNode;
  for (NodeId w : it->second)
    if (nodes_[w].labelHash == fp && nodes_[w].stype == stype &&
        nodes_[w].label == label)
      return w;
  return kNullNode;
}

NodeId Tableau::conToSucc(NodeId v, NodeType type, NodeSType stype,
                          FormulaSet label, FormulaSet rfmls,
                          std::optional<CELabel> ce) {
  uint64_t fp = label.fingerprint();
  NodeId proxy = kNullNode;
  if (type == NodeType::State) {
    auto it = stateIndex_.find(fp);
    if (it != stateIndex_.end())
      for (NodeId w : it->second)
        if (nodes_[w].stype == stype && nodes_[w].label == label) {
          proxy = w;
          break;
        }
  } else {
    // Reject proxies that would make the local graph cyclic: the candidate
    // must not reach v through non-state edges (NUS can otherwise propose v
    // itself or one of its ancestors, since only RFmls grew).
    auto reaches = [&](NodeId from, NodeId target) {
      uint32_t stamp = freshStamp();
      visitMark_[from] = stamp;
      std::vector<NodeId> stack{from};
      while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        if (u == target) return true;
        for (NodeId w : nodes_[u].succs)
          if (nodes_[w].type == NodeType::NonState &&
              visitMark_[w] != stamp) {
            visitMark_[w] = stamp;
            stack.push_back(w);
          }
      }
      return false;
    };
    auto it = localMembers_.find(nodes_[v].atPred);
    if (it != localMembers_.end())
      for (NodeId w : it->second)
        if (nodes_[w].labelHash == fp && nodes_[w].stype == stype &&
            nodes_[w].label == label && !reaches(w, v)) {
          proxy = w;
          break;
        }
  }
  if (proxy != kNullNode) {
    stats_.proxyHits++;
    addEdge(v, proxy);
    FormulaSet before = nodes_[proxy].rfmls;
    mut(proxy).rfmls.unionWith(rfmls);
    if (nodes_[proxy].rfmls != before && !isFinal(nodes_[proxy].status))
      markDirty(proxy);
    trace("proxy: " + nodeName(v) + " -> " + nodeName(proxy));
    return proxy;
  }
  return newSucc(v, type, stype, std::move(label), std::move(rfmls),
                 std::move(ce));
}

std::vector<NodeId> Tableau::localGraph(NodeId v) const {
  std::vector<NodeId> out;
  uint32_t stamp = freshStamp();
  visitMark_[v] = stamp;
  std::vector<NodeId> queue{v};
  size_t qi = 0;
  if (nodes_[v].type == NodeType::NonState) out.push_back(v);
  while (qi < queue.size()) {
    NodeId u = queue[qi++];
    for (NodeId w : nodes_[u].succs) {
      if (nodes_[w].type == NodeType::State) continue;
      if (visitMark_[w] == stamp) continue;
      visitMark_[w] = stamp;
      out.push_back(w);
      queue.push_back(w);
    }
  }
  return out;
}

FeasibilityProblem Tableau::ilpProblem(const Node& state,
                                       const std::set<int>& extraPins) const {
  FeasibilityProblem p;
  p.numVars = static_cast<int>(state.ilpSucc.size());
  p.constraints = state.ilpConstraints;
  p.pinnedZero = state.ilpPins;
  p.pinnedZero.insert(extraPins.begin(), extraPins.end());
  return p;
}

bool Tableau::feasibleNow(const Node& state, const std::set<int>& extraPins) {
  stats_.ilpChecks++;
  return isFeasible(ilpProblem(state, extraPins));
}

// ---------------------------------------------------------------------------
// Status-update rules.

bool Tableau::applyUPS1(NodeId v) {
  Node& n = mut(v);
  if (isFinal(n.status)) return false;
  FormulaSet fl = fullLabel(v);

  // Clause 1: bottom in the label, or a complementary pair in the full label.
  bool clash = false;
  for (const Formula& f : n.label)
    if (f.kind == FKind::ConceptF && f.conceptId == ctx_.bottom()) {
      clash = true;
      break;
    }
  if (!clash) {
    for (const Formula& f : fl) {
      Formula g;
      if (complementFormula(ctx_, f, g) && fl.contains(g)) {
        clash = true;
        break;
      }
    }
  }
  // Clause 2: a != a.
  if (!clash) {
    for (const Formula& f : n.label)
      if (f.kind == FKind::Distinct && f.subject == f.object) {
        clash = true;
        break;
      }
  }
  if (clash) {
    stats_.ruleApplications["UPS1"]++;
    setStatus(v, NodeStatus::Closed);
    return true;
  }

  // Clause 3: an at-most restriction with too many pairwise distinct
  // witnesses.
  if (n.type == NodeType::NonState && n.stype == NodeSType::Complex) {
    for (const Formula& f : n.label) {
      if (f.kind != FKind::ConceptF) continue;
      const ConceptNode& c = ctx_.node(f.conceptId);
      if (c.kind != CKind::AtMost) continue;
      Indiv a = f.subject;
      std::vector<Indiv> wit;
      for (const Formula& g : fl)
        if (g.kind == FKind::RoleF && g.role == c.role && g.subject == a &&
            fl.contains(Formula::conceptAt(g.object, c.lhs)))
          wit.push_back(g.object);
      std::sort(wit.begin(), wit.end());
      wit.erase(std::unique(wit.begin(), wit.end()), wit.end());
      if (static_cast<uint64_t>(wit.size()) <= c.num) continue;
      std::vector<std::vector<char>> adj(wit.size(),
                                         std::vector<char>(wit.size(), 0));
      for (size_t i = 0; i < wit.size(); ++i)
        for (size_t j = i + 1; j < wit.size(); ++j)
          if (n.label.contains(Formula::distinct(wit[i], wit[j])) ||
              n.label.contains(Formula::distinct(wit[j], wit[i])))
            adj[i][j] = adj[j][i] = 1;
      if (hasClique(adj, static_cast<size_t>(c.num) + 1)) {
        stats_.ruleApplications["UPS1"]++;
        setStatus(v, NodeStatus::Closed);
        return true;
      }
    }
  }

  if (n.type == NodeType::State && n.status == NodeStatus::FExpanded) {
    // Clause 4: infeasible counting constraints.
    if (!feasibleNow(n)) {
      stats_.ruleApplications["UPS1"]++;
      setStatus(v, NodeStatus::Closed);
      return true;
    }
    // Clause 5: a fully expanded state without successors is open.
    if (n.succs.empty()) {
      stats_.ruleApplications["UPS1"]++;
      setStatus(v, NodeStatus::Open);
      return true;
    }
  }
  return false;
}

void Tableau::evaluateUPS2(NodeId v) {
  Node& n = mut(v);
  if (isFinal(n.status)) return;
  if (n.type == NodeType::NonState) {
    if (n.succs.empty()) return;
    bool anyOpen = false, allClosed = true;
    for (NodeId w : n.succs) {
      if (nodes_[w].status == NodeStatus::Open) anyOpen = true;
      if (nodes_[w].status != NodeStatus::Closed) allClosed = false;
    }
    if (anyOpen) {
      stats_.ruleApplications["UPS2"]++;
      setStatus(v, NodeStatus::Open);
    } else if (allClosed) {
      stats_.ruleApplications["UPS2"]++;
      setStatus(v, NodeStatus::Closed);
    }
    return;
  }
  bool tcClosed = false, allTcOpen = true, cfClosed = false;
  for (NodeId w : n.succs) {
    const Node& s = nodes_[w];
    if (!s.ceLabel) continue;
    if (s.ceLabel->type == CEType::TestingClosedness) {
      if (s.status == NodeStatus::Closed) tcClosed = true;
      if (s.status != NodeStatus::Open) allTcOpen = false;
    } else if (s.status == NodeStatus::Closed) {
      cfClosed = true;
    }
  }
  if (tcClosed) {
    stats_.ruleApplications["UPS2"]++;
    setStatus(v, NodeStatus::Closed);
    return;
  }
  if (cfClosed && !feasibleNow(n)) {
    stats_.ruleApplications["UPS2"]++;
    setStatus(v, NodeStatus::Closed);
    return;
  }
  if (n.status == NodeStatus::FExpanded && allTcOpen) {
    // Open only once every feasibility successor settled: an unexpanded
    // successor may still be needed by the extracted model.
    for (NodeId w : n.succs) {
      const Node& s = nodes_[w];
      if (s.ceLabel && s.ceLabel->type == CEType::CheckingFeasibility &&
          !isFinal(s.status))
        return;
    }
    if (feasibleNow(n)) {
      stats_.ruleApplications["UPS2"]++;
      setStatus(v, NodeStatus::Open);
    }
  }
}

void Tableau::propagateStatus() {
  while (!statusQueue_.empty() || !dirtyQueue_.empty()) {
    if (!statusQueue_.empty()) {
      NodeId v = statusQueue_.front();
      statusQueue_.pop_front();
      mut(v).queued = false;
      evaluateUPS2(v);
      continue;
    }
    NodeId v = dirtyQueue_.front();
    dirtyQueue_.pop_front();
    mut(v).dirty = false;
    applyUPS1(v);
  }
}

// ---------------------------------------------------------------------------
// The unary static expansion rule.

bool Tableau::applyUS(NodeId v) {
  const Node& n = nodes_[v];
  if (n.type != NodeType::NonState || n.status != NodeStatus::Unexpanded)
    return false;

  FormulaSet X;
  std::vector<Formula> adds;
  for (const Formula& f : n.label) {
    if (f.kind == FKind::ConceptF) {
      const ConceptNode& c = ctx_.node(f.conceptId);
      if (c.kind == CKind::And) {
        X.insert(f);
        adds.push_back(Formula::conceptAt(f.subject, c.lhs));
        adds.push_back(Formula::conceptAt(f.subject, c.rhs));
      } else if (c.kind == CKind::AtLeast && c.num == 0) {
        X.insert(f);
      } else if (c.kind == CKind::AtMost && c.num == 0) {
        X.insert(f);
        adds.push_back(Formula::conceptAt(
            f.subject, ctx_.forall(c.role, ctx_.complement(c.lhs))));
      } else if (c.kind == CKind::Forall) {
        for (Role r : nkb_.rbox.roles)
          if (r != c.role && nkb_.rbox.subsumedBy(r, c.role))
            adds.push_back(Formula::conceptAt(f.subject,
                                              ctx_.forall(r, c.lhs)));
        // value propagation along asserted edges
        for (const Formula& g : n.label) {
          if (g.kind != FKind::RoleF || g.role != c.role ||
              g.subject != f.subject)
            continue;
          adds.push_back(Formula::conceptAt(g.object, c.lhs));
          if (nkb_.rbox.isTransitive(c.role))
            adds.push_back(Formula::conceptAt(g.object, f.conceptId));
        }
      }
    } else if (f.kind == FKind::RoleF) {
      adds.push_back(
          Formula::roleAssert(f.role.inverse(), f.object, f.subject));
      for (Role s : nkb_.rbox.superRoles(f.role))
        if (s != f.role)
          adds.push_back(Formula::roleAssert(s, f.subject, f.object));
    }
  }

  FormulaSet label = n.label;
  for (const Formula& f : adds) label.insert(f);
  label = label.difference(X);
  label = label.difference(n.rfmls);
  if (label.difference(n.label).empty()) {
    mut(v).usSaturated = true;
    return false;
  }

  stats_.ruleApplications["US"]++;
  trace("US: " + nodeName(v));
  FormulaSet rf = n.rfmls;
  rf.unionWith(X);
  conToSucc(v, NodeType::NonState, n.stype, std::move(label), std::move(rf),
            std::nullopt);
  setStatus(v, NodeStatus::FExpanded);
  return true;
}

// ---------------------------------------------------------------------------
// The rules for keeping converse compatibility.

bool Tableau::applyKCC1(NodeId u, NodeId v) {
  assert(nodes_[v].type == NodeType::State &&
         nodes_[v].status == NodeStatus::Incomplete);
  stats_.ruleApplications["KCC1"]++;
  trace("KCC1: re-expand " + nodeName(u) + " away from incomplete " +
        nodeName(v));
  removeEdge(u, v);
  if (isFinal(nodes_[u].status)) return true;  // nothing left to repair
  mut(u).reExpansions++;
  noteLocalExpansion(u);
  const Node& nu = nodes_[u];
  const Node& nv = nodes_[v];
  if (!nv.fmlsRC.empty()) {
    FormulaSet newLabel = nu.label;
    newLabel.unionWith(nv.fmlsRC);
    conToSucc(u, NodeType::NonState, nu.stype, std::move(newLabel), nu.rfmls,
              std::nullopt);
  } else {
    assert(nv.fmlFB.has_value());
    Formula fb = *nv.fmlFB;
    Formula nfb;
    bool ok = complementFormula(ctx_, fb, nfb);
    assert(ok);
    (void)ok;
    FormulaSet l1 = nu.label;
    l1.insert(fb);
    conToSucc(u, NodeType::NonState, nu.stype, std::move(l1), nu.rfmls,
              std::nullopt);
    FormulaSet l2 = nodes_[u].label;
    l2.insert(nfb);
    conToSucc(u, NodeType::NonState, nodes_[u].stype, std::move(l2),
              nodes_[u].rfmls, std::nullopt);
  }
  return true;
}

bool Tableau::applyKCC2(NodeId v) {
  const Node& n = nodes_[v];
  if (n.type != NodeType::State || n.status != NodeStatus::PExpanded)
    return false;
  FormulaSet flv = fullLabel(v);
  FormulaSet X;
  for (NodeId w : localGraph(v)) {
    NodeId w0 = nodes_[w].atPred;
    const auto& ce = nodes_[w0].ceLabel;
    if (!ce) continue;
    Indiv alpha = ce->indiv;
    for (const Formula& f : nodes_[w].label) {
      if (f.kind != FKind::ConceptF) continue;
      const ConceptNode& c = ctx_.node(f.conceptId);
      if (c.kind != CKind::Forall) continue;
      Role R = c.role.inverse();
      if (!ce->roles.count(R)) continue;
      Formula need = Formula::conceptAt(alpha, c.lhs);
      if (!flv.contains(need)) X.insert(need);
      if (nkb_.rbox.isTransitive(R)) {
        Formula needAll = Formula::conceptAt(alpha, f.conceptId);
        if (!flv.contains(needAll)) X.insert(needAll);
      }
    }
  }
  if (X.empty()) return false;
  stats_.ruleApplications["KCC2"]++;
  trace("KCC2: " + nodeName(v) + " incomplete, FmlsRC " + setToString(ctx_, X));
  mut(v).fmlsRC = X;
  setStatus(v, NodeStatus::Incomplete);
  return true;
}

bool Tableau::applyKCC3(NodeId uid) {
  {
    const Node& u = nodes_[uid];
    FormulaSet flu = fullLabel(u.id);
    bool uExpandable = u.status == NodeStatus::PExpanded ||
                       u.status == NodeStatus::FExpanded;
    for (NodeId v0 : u.succs) {
      const auto& ce = nodes_[v0].ceLabel;
      if (!ce) continue;
      Indiv alpha = ce->indiv;
      for (Role R : ce->roles) {
        for (NodeId v : localGraph(v0)) {
          if (nodes_[v].status == NodeStatus::Closed) continue;
          for (const Formula& f : nodes_[v].label) {
            if (f.kind != FKind::ConceptF) continue;
            const ConceptNode& c = ctx_.node(f.conceptId);
            if (c.kind != CKind::Forall || c.role != R.inverse()) continue;
            ConceptId C = c.lhs;
            ConceptId notC = ctx_.complement(C);
            bool trans = nkb_.rbox.isTransitive(R);
            if (flu.contains(Formula::conceptAt(alpha, notC))) {
              stats_.ruleApplications["KCC3"]++;
              trace("KCC3: close " + nodeName(v));
              setStatus(v, NodeStatus::Closed);
              return true;
            }
            if (trans && flu.contains(Formula::conceptAt(
                             alpha, ctx_.exists(R.inverse(), notC)))) {
              stats_.ruleApplications["KCC3"]++;
              trace("KCC3: close " + nodeName(v) + " (transitive)");
              setStatus(v, NodeStatus::Closed);
              return true;
            }
            if (!flu.contains(Formula::conceptAt(alpha, C)) && uExpandable) {
              stats_.ruleApplications["KCC3"]++;
              trace("KCC3: " + nodeName(u.id) + " incomplete, FmlFB " +
                    formulaToString(ctx_, Formula::conceptAt(alpha, C)));
              mut(u.id).fmlFB = Formula::conceptAt(alpha, C);
              setStatus(u.id, NodeStatus::Incomplete);
              return true;
            }
            if (trans &&
                !flu.contains(Formula::conceptAt(alpha, f.conceptId)) &&
                uExpandable) {
              stats_.ruleApplications["KCC3"]++;
              trace("KCC3: " + nodeName(u.id) + " incomplete, FmlFB " +
                    formulaToString(ctx_,
                                    Formula::conceptAt(alpha, f.conceptId)));
              mut(u.id).fmlFB = Formula::conceptAt(alpha, f.conceptId);
              setStatus(u.id, NodeStatus::Incomplete);
              return true;
            }
          }
        }
      }
    }
  }
  return false;
}

bool Tableau::applyKCC4(NodeId uid) {
  {
    const Node& u = nodes_[uid];
    if (u.status != NodeStatus::PExpanded &&
        u.status != NodeStatus::FExpanded)
      return false;
    FormulaSet flu = fullLabel(u.id);
    for (NodeId v0 : u.succs) {
      const auto& ce = nodes_[v0].ceLabel;
      if (!ce) continue;
      Indiv alpha = ce->indiv;
      for (Role R : ce->roles) {
        for (NodeId v : localGraph(v0)) {
          if (nodes_[v].status == NodeStatus::Closed) continue;
          for (const Formula& f : nodes_[v].label) {
            if (f.kind != FKind::ConceptF) continue;
            const ConceptNode& c = ctx_.node(f.conceptId);
            bool hit = false;
            if (c.kind == CKind::AtMost && c.role == R.inverse()) hit = true;
            if ((c.kind == CKind::AtLeast || c.kind == CKind::Exists) &&
                c.role == R.inverse() && nkb_.rbox.isNumeric(R))
              hit = true;
            if (!hit) continue;
            ConceptId C = c.lhs;
            if (flu.contains(Formula::conceptAt(alpha, C)) ||
                flu.contains(Formula::conceptAt(alpha, ctx_.complement(C))))
              continue;
            stats_.ruleApplications["KCC4"]++;
            trace("KCC4: " + nodeName(u.id) + " incomplete, FmlFB " +
                  formulaToString(ctx_, Formula::conceptAt(alpha, C)));
            mut(u.id).fmlFB = Formula::conceptAt(alpha, C);
            setStatus(u.id, NodeStatus::Incomplete);
            return true;
          }
        }
      }
    }
  }
  return false;
}

bool Tableau::applyKCC5(NodeId uid) {
  {
    const Node& u = nodes_[uid];
    if (u.status != NodeStatus::FExpanded) return false;
    FormulaSet flu = fullLabel(u.id);
    for (NodeId v0 : u.succs) {
      const auto& ce = nodes_[v0].ceLabel;
      if (!ce || ce->type != CEType::CheckingFeasibility) continue;
      Indiv alpha = ce->indiv;
      for (Role R : ce->roles) {
        for (NodeId v : localGraph(v0)) {
          if (nodes_[v].status == NodeStatus::Closed) continue;
          for (const Formula& f : nodes_[v].label) {
            if (f.kind != FKind::ConceptF) continue;
            const ConceptNode& c = ctx_.node(f.conceptId);
            if (c.kind != CKind::AtMost || c.role != R.inverse()) continue;
            ConceptId C = c.lhs;
            if (!flu.contains(Formula::conceptAt(alpha, C))) continue;
            for (const Formula& g : nodes_[v].label) {
              if (g.kind != FKind::ConceptF) continue;
              const ConceptNode& d = ctx_.node(g.conceptId);
              if (d.kind != CKind::AtLeast && d.kind != CKind::Exists)
                continue;
              Role S = d.role.inverse();
              if (!nkb_.rbox.subsumedBy(S, R)) continue;
              if (ce->roles.count(S)) continue;
              ConceptId D = d.lhs;
              if (flu.contains(
                      Formula::conceptAt(alpha, ctx_.complement(D))))
                continue;
              ConceptId someTop = ctx_.exists(S, ctx_.topAnn(R));
              ConceptId allBot = ctx_.forall(S, ctx_.bottom());
              if (u.label.contains(Formula::conceptAt(alpha, someTop)) ||
                  u.label.contains(Formula::conceptAt(alpha, allBot)))
                continue;
              stats_.ruleApplications["KCC5"]++;
              trace("KCC5: " + nodeName(u.id) + " incomplete, FmlFB " +
                    formulaToString(ctx_,
                                    Formula::conceptAt(alpha, someTop)));
              mut(u.id).fmlFB = Formula::conceptAt(alpha, someTop);
              setStatus(u.id, NodeStatus::Incomplete);
              return true;
            }
          }
        }
      }
    }
  }
  return false;
}

bool Tableau::applyKCCRepairs() {
  while (!kccQueue_.empty()) {
    NodeId u = kccQueue_.front();
    kccQueue_.pop_front();
    mut(u).kccQueued = false;
    if (nodes_[u].type != NodeType::State) continue;
    if (applyKCC3(u) || applyKCC4(u) || applyKCC5(u)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// The non-unary static expansion rule.

bool Tableau::applyNUS(NodeId v) {
  const Node& n = nodes_[v];
  if (n.type != NodeType::NonState || n.status != NodeStatus::Unexpanded)
    return false;
  FormulaSet fl = fullLabel(v);

  // Subrule 1: syntactic branching on a disjunction.
  for (const Formula& f : n.label) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind != CKind::Or) continue;
    if (fl.contains(Formula::conceptAt(f.subject, c.lhs)) ||
        fl.contains(Formula::conceptAt(f.subject, c.rhs)))
      continue;
    stats_.ruleApplications["NUS1"]++;
    trace("NUS1: " + nodeName(v) + " branches on " +
          formulaToString(ctx_, f));
    noteLocalExpansion(v);
    FormulaSet X = n.label;
    X.erase(f);
    FormulaSet Y = n.rfmls;
    Y.insert(f);
    FormulaSet l1 = X;
    l1.insert(Formula::conceptAt(f.subject, c.lhs));
    FormulaSet l2 = X;
    l2.insert(Formula::conceptAt(f.subject, c.rhs));
    conToSucc(v, NodeType::NonState, n.stype, std::move(l1), Y, std::nullopt);
    conToSucc(v, NodeType::NonState, nodes_[v].stype, std::move(l2),
              std::move(Y), std::nullopt);
    setStatus(v, NodeStatus::FExpanded);
    return true;
  }

  if (n.stype != NodeSType::Complex) return false;

  // Subrule 2: semantic branching on the qualification of an asserted
  // successor under a number restriction.
  for (const Formula& e : n.label) {
    if (e.kind != FKind::RoleF) continue;
    Indiv a = e.subject, b = e.object;
    for (const Formula& f : n.label) {
      if (f.kind != FKind::ConceptF || f.subject != a) continue;
      const ConceptNode& c = ctx_.node(f.conceptId);
      bool hit = c.kind == CKind::AtMost && c.role == e.role;
      if ((c.kind == CKind::AtLeast || c.kind == CKind::Exists) &&
          c.role == e.role && nkb_.rbox.isNumeric(e.role))
        hit = true;
      if (!hit) continue;
      ConceptId C = c.lhs;
      if (fl.contains(Formula::conceptAt(b, C)) ||
          fl.contains(Formula::conceptAt(b, ctx_.complement(C))))
        continue;
      stats_.ruleApplications["NUS2"]++;
      trace("NUS2: " + nodeName(v) + " branches on " +
            formulaToString(ctx_, Formula::conceptAt(b, C)));
      noteLocalExpansion(v);
      FormulaSet l1 = n.label;
      l1.insert(Formula::conceptAt(b, C));
      FormulaSet l2 = n.label;
      l2.insert(Formula::conceptAt(b, ctx_.complement(C)));
      conToSucc(v, NodeType::NonState, NodeSType::Complex, std::move(l1),
                n.rfmls, std::nullopt);
      conToSucc(v, NodeType::NonState, NodeSType::Complex, std::move(l2),
                nodes_[v].rfmls, std::nullopt);
      setStatus(v, NodeStatus::FExpanded);
      return true;
    }
  }

  // Subrule 3: merge-or-distinguish two witnesses of an at-most restriction.
  for (const Formula& f : fl) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind != CKind::AtMost) continue;
    Indiv a = f.subject;
    std::vector<Indiv> wit;
    for (const Formula& g : fl)
      if (g.kind == FKind::RoleF && g.role == c.role && g.subject == a &&
          fl.contains(Formula::conceptAt(g.object, c.lhs)))
        wit.push_back(g.object);
    std::sort(wit.begin(), wit.end());
    wit.erase(std::unique(wit.begin(), wit.end()), wit.end());
    for (size_t i = 0; i < wit.size(); ++i) {
      for (size_t j = i + 1; j < wit.size(); ++j) {
        Indiv b = wit[i], b2 = wit[j];
        if (n.label.contains(Formula::distinct(b, b2)) ||
            n.label.contains(Formula::distinct(b2, b)))
          continue;
        stats_.ruleApplications["NUS3"]++;
        trace("NUS3: " + nodeName(v) + " merges or distinguishes " +
              ctx_.individuals().name(b) + ", " + ctx_.individuals().name(b2));
        noteLocalExpansion(v);
        auto substitute = [&](Indiv x) { return x == b2 ? b : x; };
        std::vector<Formula> xs;
        for (Formula g : n.label) {
          g.subject = (g.subject == kNoIndiv) ? g.subject
                                              : substitute(g.subject);
          if (g.object != kNoIndiv) g.object = substitute(g.object);
          xs.push_back(g);
        }
        std::vector<Formula> ys;
        for (Formula g : n.rfmls) {
          if (g.kind != FKind::Equal) {
            if (g.subject != kNoIndiv) g.subject = substitute(g.subject);
            if (g.object != kNoIndiv) g.object = substitute(g.object);
          }
          ys.push_back(g);
        }
        FormulaSet X{std::move(xs)};
        FormulaSet Y{std::move(ys)};
        Y.insert(Formula::equal(b, b2));
        conToSucc(v, NodeType::NonState, NodeSType::Complex, std::move(X),
                  std::move(Y), std::nullopt);
        FormulaSet l2 = n.label;
        l2.insert(Formula::distinct(b, b2));
        conToSucc(v, NodeType::NonState, NodeSType::Complex, std::move(l2),
                  nodes_[v].rfmls, std::nullopt);
        setStatus(v, NodeStatus::FExpanded);
        return true;
      }
    }
  }

  // Subrule 4: decide whether an asserted R-successor is also an S-successor
  // for a subrole S occurring in an existential requirement.
  for (const Formula& f : n.label) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind != CKind::AtMost) continue;
    Indiv a = f.subject;
    for (const Formula& e : n.label) {
      if (e.kind != FKind::RoleF || e.role != c.role || e.subject != a)
        continue;
      Indiv b = e.object;
      for (const Formula& g : n.label) {
        if (g.kind != FKind::ConceptF || g.subject != a) continue;
        const ConceptNode& d = ctx_.node(g.conceptId);
        if (d.kind != CKind::AtLeast && d.kind != CKind::Exists) continue;
        Role S = d.role;
        if (!nkb_.rbox.subsumedBy(S, c.role)) continue;
        if (fl.contains(Formula::roleAssert(S, a, b)) ||
            fl.contains(Formula::negRoleAssert(S, a, b)))
          continue;
        stats_.ruleApplications["NUS4"]++;
        trace("NUS4: " + nodeName(v) + " branches on " +
              formulaToString(ctx_, Formula::roleAssert(S, a, b)));
        noteLocalExpansion(v);
        FormulaSet l1 = n.label;
        l1.insert(Formula::roleAssert(S, a, b));
        conToSucc(v, NodeType::NonState, NodeSType::Complex, std::move(l1),
                  n.rfmls, std::nullopt);
        FormulaSet rf = nodes_[v].rfmls;
        rf.insert(Formula::negRoleAssert(S, a, b));
        conToSucc(v, NodeType::NonState, NodeSType::Complex, nodes_[v].label,
                  std::move(rf), std::nullopt);
        setStatus(v, NodeStatus::FExpanded);
        return true;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// The forming-state rule.

void Tableau::applyFS1(NodeId v) {
  const Node& n = nodes_[v];
  assert(n.stype == NodeSType::Simple &&
         n.status == NodeStatus::Unexpanded);
  NodeId u = n.statePred;
  NodeId v0 = n.atPred;
  const CELabel& ce = *nodes_[v0].ceLabel;
  Indiv alpha = ce.indiv;
  FormulaSet flu = fullLabel(u);
  auto backward = [&](Role R, ConceptId D) {
    return ce.roles.count(R.inverse()) != 0 &&
           flu.contains(Formula::conceptAt(alpha, D));
  };

  FormulaSet X = n.label;
  for (const Formula& f : n.label) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind == CKind::AtMost) {
      uint64_t m = backward(c.role, c.lhs) && c.num > 0 ? c.num - 1 : c.num;
      X.insert(Formula::conceptOnly(ctx_.maxPend(m, c.role, c.lhs)));
    } else if (c.kind == CKind::AtLeast && c.num >= 2) {
      uint64_t m = backward(c.role, c.lhs) ? c.num - 1 : c.num;
      X.insert(Formula::conceptOnly(ctx_.minPend(m, c.role, c.lhs)));
    } else if ((c.kind == CKind::AtLeast && c.num == 1) ||
               (c.kind == CKind::Exists && nkb_.rbox.isNumeric(c.role))) {
      if (!backward(c.role, c.lhs))
        X.insert(Formula::conceptOnly(ctx_.minPend(1, c.role, c.lhs)));
    }
  }
  stats_.ruleApplications["FS1"]++;
  trace("FS1: " + nodeName(v));
  noteLocalExpansion(v);
  conToSucc(v, NodeType::State, NodeSType::Simple, std::move(X), n.rfmls,
            std::nullopt);
  setStatus(v, NodeStatus::FExpanded);
}

void Tableau::applyFS2(NodeId v) {
  const Node& n = nodes_[v];
  assert(n.stype == NodeSType::Complex &&
         n.status == NodeStatus::Unexpanded);
  FormulaSet fl = fullLabel(v);
  auto countWitnesses = [&](Indiv a, Role R, ConceptId D) {
    uint64_t m = 0;
    std::set<Indiv> seen;
    for (const Formula& g : fl)
      if (g.kind == FKind::RoleF && g.role == R && g.subject == a &&
          fl.contains(Formula::conceptAt(g.object, D)) &&
          seen.insert(g.object).second)
        ++m;
    return m;
  };

  FormulaSet X = n.label;
  for (const Formula& f : n.label) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind == CKind::AtMost) {
      uint64_t m = countWitnesses(f.subject, c.role, c.lhs);
      if (m > c.num) {
        // More witnesses than the bound allows; the clash-detection rule
        // closes such nodes first, so this is unreachable in normal runs.
        setStatus(v, NodeStatus::Closed);
        return;
      }
      X.insert(Formula::conceptAt(f.subject,
                                  ctx_.maxPend(c.num - m, c.role, c.lhs)));
    } else if ((c.kind == CKind::AtLeast || c.kind == CKind::Exists) &&
               nkb_.rbox.isNumeric(c.role)) {
      uint64_t need = c.kind == CKind::Exists ? 1 : c.num;
      uint64_t m = countWitnesses(f.subject, c.role, c.lhs);
      if (need > m)
        X.insert(Formula::conceptAt(
            f.subject, ctx_.minPend(need - m, c.role, c.lhs)));
    }
  }
  stats_.ruleApplications["FS2"]++;
  trace("FS2: " + nodeName(v));
  noteLocalExpansion(v);
  conToSucc(v, NodeType::State, NodeSType::Complex, std::move(X), n.rfmls,
            std::nullopt);
  setStatus(v, NodeStatus::FExpanded);
}

// ---------------------------------------------------------------------------
// The transitional rules.

void Tableau::applyTP(NodeId v) {
  const Node& n = nodes_[v];
  assert(n.type == NodeType::State && n.status == NodeStatus::Unexpanded);
  stats_.ruleApplications["TP"]++;
  trace("TP: " + nodeName(v));
  std::vector<Formula> work(n.label.begin(), n.label.end());
  for (const Formula& f : work) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind != CKind::Exists || nkb_.rbox.isNumeric(c.role)) continue;
    Indiv alpha = f.subject;
    Role R = c.role;
    FormulaSet X;
    X.insert(Formula::conceptOnly(c.lhs));
    for (const Formula& g : nodes_[v].label) {
      if (g.kind != FKind::ConceptF || g.subject != alpha) continue;
      const ConceptNode& d = ctx_.node(g.conceptId);
      if (d.kind != CKind::Forall) continue;
      if (d.role == R) X.insert(Formula::conceptOnly(d.lhs));
      if (nkb_.rbox.subsumedBy(R, d.role) && nkb_.rbox.isTransitive(d.role))
        X.insert(Formula::conceptOnly(g.conceptId));
    }
    for (ConceptId t : nkb_.tboxConcepts) X.insert(Formula::conceptOnly(t));
    CELabel ce;
    ce.type = CEType::TestingClosedness;
    for (Role s : nkb_.rbox.superRoles(R)) ce.roles.insert(s);
    ce.indiv = alpha;
    newSucc(v, NodeType::NonState, NodeSType::Simple, std::move(X),
            FormulaSet(), ce);
  }
  setStatus(v, NodeStatus::PExpanded);
  mut(v).kcc2Pending = true;
  kcc2Queue_.push_back(v);
}

namespace {
struct Tuple {
  std::set<uint32_t> roles;   // role codes; the CELabelR of the successor
  std::set<ConceptId> cs;     // the label of the successor
  Indiv alpha = kNoIndiv;
  bool operator<(const Tuple& o) const {
    if (alpha != o.alpha) return alpha < o.alpha;
    if (roles != o.roles) return roles < o.roles;
    return cs < o.cs;
  }
};
}  // namespace

void Tableau::applyTF(NodeId v) {
  const Node& n = nodes_[v];
  assert(n.type == NodeType::State && n.status == NodeStatus::PExpanded);
  assert(n.kcc2Done || !n.kcc2Pending);
  stats_.ruleApplications["TF"]++;
  trace("TF: " + nodeName(v));

  auto clashes = [&](const std::set<ConceptId>& ys) {
    for (ConceptId c : ys)
      if (ys.count(ctx_.complement(c))) return true;
    return false;
  };

  std::set<Tuple> E;
  // Seed tuples: one per pending at-least requirement.
  for (const Formula& f : n.label) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind != CKind::MinPend) continue;
    Tuple t;
    t.alpha = f.subject;
    for (Role s : nkb_.rbox.superRoles(c.role)) t.roles.insert(s.code());
    t.cs.insert(c.lhs);
    for (const Formula& g : n.label) {
      if (g.kind != FKind::ConceptF || g.subject != f.subject) continue;
      const ConceptNode& d = ctx_.node(g.conceptId);
      if (d.kind != CKind::Forall) continue;
      if (d.role == c.role) t.cs.insert(d.lhs);
      if (nkb_.rbox.subsumedBy(c.role, d.role) &&
          nkb_.rbox.isTransitive(d.role))
        t.cs.insert(g.conceptId);
    }
    for (ConceptId tb : nkb_.tboxConcepts) t.cs.insert(tb);
    E.insert(std::move(t));
  }

  // Split every tuple on the qualifications of at-most requirements.
  for (const Formula& f : n.label) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind != CKind::MaxPend) continue;
    ConceptId C = c.lhs;
    ConceptId notC = ctx_.complement(C);
    std::set<Tuple> next;
    for (const Tuple& t : E) {
      if (t.alpha == f.subject && t.roles.count(c.role.code()) &&
          !t.cs.count(C) && !t.cs.count(notC)) {
        Tuple t1 = t, t2 = t;
        t1.cs.insert(C);
        t2.cs.insert(notC);
        next.insert(std::move(t1));
        next.insert(std::move(t2));
      } else {
        next.insert(t);
      }
    }
    E.swap(next);
  }

  // Saturate with mergers: tuples counted by the same at-most requirement on
  // the same side of the split may denote the same successors, and tuples
  // sharing an annotated top may be merged along the shared role.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Tuple> snap(E.begin(), E.end());
    auto tryMerge = [&](const Tuple& t1, const Tuple& t2) {
      Tuple m;
      m.alpha = t1.alpha;
      m.roles = t1.roles;
      m.roles.insert(t2.roles.begin(), t2.roles.end());
      m.cs = t1.cs;
      m.cs.insert(t2.cs.begin(), t2.cs.end());
      if (E.count(m) || clashes(m.cs)) return;
      E.insert(std::move(m));
      changed = true;
    };
    for (const Formula& f : n.label) {
      if (f.kind != FKind::ConceptF) continue;
      const ConceptNode& c = ctx_.node(f.conceptId);
      if (c.kind != CKind::MaxPend) continue;
      ConceptId C = c.lhs;
      ConceptId notC = ctx_.complement(C);
      for (size_t i = 0; i < snap.size(); ++i)
        for (size_t j = i + 1; j < snap.size(); ++j) {
          const Tuple &t1 = snap[i], &t2 = snap[j];
          if (t1.alpha != f.subject || t2.alpha != f.subject) continue;
          if (!t1.roles.count(c.role.code()) ||
              !t2.roles.count(c.role.code()))
            continue;
          if ((t1.cs.count(C) && t2.cs.count(C)) ||
              (t1.cs.count(notC) && t2.cs.count(notC)))
            tryMerge(t1, t2);
        }
    }
    for (size_t i = 0; i < snap.size(); ++i)
      for (size_t j = i + 1; j < snap.size(); ++j) {
        const Tuple &t1 = snap[i], &t2 = snap[j];
        if (t1.alpha != t2.alpha) continue;
        for (uint32_t rc : t1.roles) {
          if (!t2.roles.count(rc)) continue;
          ConceptId annTop = ctx_.topAnn(Role::fromCode(rc));
          if (t1.cs.count(annTop) || t2.cs.count(annTop)) {
            tryMerge(t1, t2);
            break;
          }
        }
      }
  }

  // Create the feasibility-checking successors and the counting constraints.
  Node& nv = mut(v);
  for (const Tuple& t : E) {
    FormulaSet label;
    for (ConceptId c : t.cs) label.insert(Formula::conceptOnly(c));
    CELabel ce;
    ce.type = CEType::CheckingFeasibility;
    for (uint32_t rc : t.roles) ce.roles.insert(Role::fromCode(rc));
    ce.indiv = t.alpha;
    NodeId w = newSucc(v, NodeType::NonState, NodeSType::Simple,
                       std::move(label), FormulaSet(), ce);
    nv.ilpVarOf[w] = static_cast<int>(nv.ilpSucc.size());
    nv.ilpSucc.push_back(w);
  }
  std::set<LinearConstraint> seen;
  for (const Formula& f : nv.label) {
    if (f.kind != FKind::ConceptF) continue;
    const ConceptNode& c = ctx_.node(f.conceptId);
    if (c.kind != CKind::MinPend && c.kind != CKind::MaxPend) continue;
    LinearConstraint lc;
    lc.rel = c.kind == CKind::MinPend ? Rel::Ge : Rel::Le;
    lc.bound = c.num;
    for (size_t i = 0; i < nv.ilpSucc.size(); ++i) {
      const Node& w = nodes_[nv.ilpSucc[i]];
      if (w.ceLabel->indiv == f.subject && w.ceLabel->roles.count(c.role) &&
          w.label.contains(Formula::conceptOnly(c.lhs)))
        lc.vars.push_back(static_cast<int>(i));
    }
    if (seen.insert(lc).second) nv.ilpConstraints.push_back(std::move(lc));
  }
  setStatus(v, NodeStatus::FExpanded);
  markDirty(v);
  enqueueStatus(v);
}

// ---------------------------------------------------------------------------
// The main loop.

NodeId Tableau::pickNode() {
  // Nodes that still need expansion and are reachable from the initial node
  // through non-final nodes.
  if (isFinal(nodes_[root_].status)) return kNullNode;
  auto expandable = [&](NodeId v) {
    return nodes_[v].status == NodeStatus::Unexpanded ||
           nodes_[v].status == NodeStatus::PExpanded;
  };
  // A candidate is dead once its home state settled or every predecessor is
  // final; both are permanent, so dropping it from the batch is safe (a
  // rebuild re-collects nodes resurrected by later proxy edges).
  auto live = [&](NodeId v) {
    if (!expandable(v)) return false;
    const Node& n = nodes_[v];
    if (n.type == NodeType::NonState && n.statePred != kNullNode &&
        isFinal(nodes_[n.statePred].status))
      return false;
    if (v != root_) {
      bool anyLive = false;
      for (NodeId p : n.preds)
        if (!isFinal(nodes_[p].status)) {
          anyLive = true;
          break;
        }
      if (!anyLive) return false;
    }
    return true;
  };
  auto collect = [&](std::vector<NodeId>& out) {
    uint32_t stamp = freshStamp();
    visitMark_[root_] = stamp;
    std::vector<NodeId> queue{root_};
    size_t qi = 0;
    while (qi < queue.size()) {
      NodeId u = queue[qi++];
      if (expandable(u)) out.push_back(u);
      if (isFinal(nodes_[u].status)) continue;
      for (NodeId w : nodes_[u].succs)
        if (visitMark_[w] != stamp) {
          visitMark_[w] = stamp;
          queue.push_back(w);
        }
    }
  };
  if (opts_.seed) {
    std::vector<NodeId> candidates;
    collect(candidates);
    if (candidates.empty()) return kNullNode;
    std::uniform_int_distribution<size_t> d(0, candidates.size() - 1);
    return candidates[d(rng_)];
  }
  // FIFO mode reuses the candidate list while it stays valid: only an edge
  // removal or a node turning final can cut candidates off from the root.
  bool rebuilt = false;
  if (candEpoch_ != epoch_) {
    std::vector<NodeId> candidates;
    collect(candidates);
    std::sort(candidates.begin(), candidates.end());
    candBatch_.assign(candidates.begin(), candidates.end());
    candEpoch_ = epoch_;
    rebuilt = true;
  }
  for (;;) {
    while (!candBatch_.empty()) {
      NodeId v = candBatch_.front();
      candBatch_.pop_front();
      if (live(v)) return v;
    }
    if (rebuilt) return kNullNode;
    std::vector<NodeId> candidates;
    collect(candidates);
    std::sort(candidates.begin(), candidates.end());
    candBatch_.assign(candidates.begin(), candidates.end());
    candEpoch_ = epoch_;
    rebuilt = true;
  }
}

void Tableau::expandChosen(NodeId v) {
  const Node& n = nodes_[v];
  if (n.type == NodeType::NonState) {
    if (applyNUS(v)) return;
    if (n.stype == NodeSType::Simple)
      applyFS1(v);
    else
      applyFS2(v);
    return;
  }
  if (n.status == NodeStatus::Unexpanded) {
    applyTP(v);
    // The state stays a candidate for TF and is still the oldest one.
    candBatch_.push_front(v);
  } else {
    applyTF(v);
  }
}

Verdict Tableau::run() {
  for (;;) {
    propagateStatus();
    if (isFinal(nodes_[root_].status)) break;
    if (nodes_.size() > opts_.maxNodes) return Verdict::ResourceLimit;

    // Global-priority phase: US, then the converse-compatibility rules.
    bool fired = false;
    while (!usQueue_.empty() && !fired) {
      NodeId v = usQueue_.front();
      usQueue_.pop_front();
      mut(v).usQueued = false;
      if (nodes_[v].type == NodeType::NonState &&
          nodes_[v].status == NodeStatus::Unexpanded &&
          !nodes_[v].usSaturated)
        fired = applyUS(v);
    }
    if (fired) continue;

    while (!kcc1Queue_.empty() && !fired) {
      NodeId v = kcc1Queue_.front();
      if (nodes_[v].status != NodeStatus::Incomplete ||
          nodes_[v].preds.empty()) {
        kcc1Queue_.pop_front();  // nothing (left) to redirect
        continue;
      }
      fired = applyKCC1(nodes_[v].preds.front(), v);
    }
    if (fired) continue;

    while (!kcc2Queue_.empty() && !fired) {
      NodeId v = kcc2Queue_.front();
      kcc2Queue_.pop_front();
      Node& n = mut(v);
      if (n.kcc2Done) continue;
      if (n.status == NodeStatus::PExpanded && n.localOnlyUS)
        fired = applyKCC2(v);
      n.kcc2Done = true;
    }
    if (fired) continue;

    if (applyKCCRepairs()) continue;

    NodeId v = pickNode();
    if (v == kNullNode) break;
    expandChosen(v);
  }
  propagateStatus();
  return nodes_[root_].status == NodeStatus::Closed ? Verdict::Unsat
                                                    : Verdict::Sat;
}

void Tableau::exportDot(std::ostream& os) const {
  os << "digraph tableau {\n  rankdir=TB;\n";
  for (const Node& n : nodes_) {
    std::string shape = n.type == NodeType::State ? "doubleoctagon" : "box";
    std::string color = "black";
    switch (n.status) {
      case NodeStatus::Closed: color = "red"; break;
      case NodeStatus::Open: color = "darkgreen"; break;
      case NodeStatus::Incomplete: color = "orange"; break;
      default: break;
    }
    std::string label = nodeName(n.id);
    label += n.stype == NodeSType::Complex ? " (complex " : " (simple ";
    label += statusName(n.status);
    label += ")\\n";
    std::string fmls = setToString(ctx_, n.label);
    for (char c : fmls)
      label += (c == '"') ? '\'' : c;
    os << "  n" << n.id << " [shape=" << shape << ", color=" << color
       << ", label=\"" << label << "\"];\n";
  }
  for (const Node& n : nodes_)
    for (NodeId w : n.succs) {
      os << "  n" << n.id << " -> n" << w;
      if (nodes_[w].ceLabel &&
          nodes_[w].ceLabel->type == CEType::CheckingFeasibility)
        os << " [style=dashed]";
      os << ";\n";
    }
  os << "}\n";
}

Verdict checkSatisfiability(TermContext& ctx, const NormalizedKb& nkb,
                            TableauOptions opts) {
  Tableau t(ctx, nkb, std::move(opts));
  return t.run();
}

}  // namespace shiq
