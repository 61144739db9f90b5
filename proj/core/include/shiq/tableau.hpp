// The tableau engine: an and-or graph over states and non-states with global
// state caching, converse-compatibility repair and integer linear feasibility
// checking for qualified number restrictions.
#ifndef SHIQ_TABLEAU_HPP
#define SHIQ_TABLEAU_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "shiq/ilfc.hpp"
#include "shiq/kb.hpp"

namespace shiq {

using NodeId = uint32_t;
constexpr NodeId kNullNode = 0xFFFFFFFFu;

enum class NodeType : uint8_t { NonState, State };
enum class NodeSType : uint8_t { Complex, Simple };

// Status lattice: unexpanded -> p-expanded -> f-expanded, with the final
// statuses incomplete/closed/open reachable from any non-final status.
enum class NodeStatus : uint8_t {
  Unexpanded,
  PExpanded,
  FExpanded,
  Incomplete,
  Closed,
  Open,
};

inline bool isFinal(NodeStatus s) {
  return s == NodeStatus::Incomplete || s == NodeStatus::Closed ||
         s == NodeStatus::Open;
}

enum class CEType : uint8_t { TestingClosedness, CheckingFeasibility };

// Coming-edge label of an AfterTrans node: how its local graph hangs off the
// predecessor state.
struct CELabel {
  CEType type = CEType::TestingClosedness;
  std::set<Role> roles;     // CELabelR
  Indiv indiv = kNoIndiv;   // CELabelI; null for successors of simple states
};

struct Node {
  NodeId id = kNullNode;
  NodeType type = NodeType::NonState;
  NodeSType stype = NodeSType::Complex;
  NodeStatus status = NodeStatus::Unexpanded;
  FormulaSet label;
  FormulaSet rfmls;
  NodeId statePred = kNullNode;
  NodeId atPred = kNullNode;  // defined for non-states only
  std::optional<CELabel> ceLabel;
  FormulaSet fmlsRC;
  std::optional<Formula> fmlFB;

  // ILConstraints of a state: one variable per checkingFeasibility successor.
  std::vector<NodeId> ilpSucc;          // variable index -> successor id
  std::map<NodeId, int> ilpVarOf;
  std::vector<LinearConstraint> ilpConstraints;
  std::set<int> ilpPins;                // pinned-to-zero variable indexes

  std::vector<NodeId> succs, preds;
  uint64_t labelHash = 0;

  bool kcc2Pending = false;   // set by TP: KCC2 must be evaluated before TF
  bool kcc2Done = false;
  bool localOnlyUS = true;    // no non-US expansion in this state's local graph
  int reExpansions = 0;       // KCC1 re-expansions of this non-state
  std::vector<NodeStatus> statusHistory;

  bool dirty = false, queued = false;
  bool usSaturated = false;  // US last found nothing to add; reset on growth
  bool usQueued = false, kccQueued = false;

  bool afterTrans() const {
    return type == NodeType::NonState && atPred == id &&
           statePred != kNullNode;
  }
};

enum class Verdict { Sat, Unsat, ResourceLimit };

struct TableauOptions {
  uint64_t maxNodes = 1'000'000;
  std::optional<uint64_t> seed;  // random node selection; unset = FIFO
  std::ostream* trace = nullptr;
};

struct TableauStats {
  uint64_t nodesCreated = 0;
  uint64_t proxyHits = 0;
  uint64_t ilpChecks = 0;
  std::map<std::string, uint64_t> ruleApplications;
};

class Tableau {
public:
  Tableau(TermContext& ctx, const NormalizedKb& nkb,
          TableauOptions opts = {});

  // Runs the construction to quiescence and reports the verdict.
  Verdict run();

  // --- graph primitives (public for white-box testing) ---
  NodeId newSucc(NodeId v, NodeType type, NodeSType stype, FormulaSet label,
                 FormulaSet rfmls, std::optional<CELabel> ce);
  NodeId findProxy(NodeType type, NodeSType stype, NodeId v1,
                   const FormulaSet& label) const;
  NodeId conToSucc(NodeId v, NodeType type, NodeSType stype, FormulaSet label,
                   FormulaSet rfmls, std::optional<CELabel> ce);
  FormulaSet fullLabel(NodeId v) const;

  // --- rules; each returns true when it changed the graph ---
  bool applyUPS1(NodeId v);
  void propagateStatus();  // drains the UPS2 task queue and the dirty queue
  bool applyUS(NodeId v);
  bool applyKCC1(NodeId u, NodeId v);
  bool applyKCC2(NodeId v);
  bool applyKCC3(NodeId u);
  bool applyKCC4(NodeId u);
  bool applyKCC5(NodeId u);
  bool applyNUS(NodeId v);
  void applyFS1(NodeId v);
  void applyFS2(NodeId v);
  void applyTP(NodeId v);
  void applyTF(NodeId v);

  // --- inspection ---
  NodeId root() const { return root_; }
  size_t nodeCount() const { return nodes_.size(); }
  const Node& node(NodeId v) const { return nodes_[v]; }
  const TableauStats& stats() const { return stats_; }
  const NormalizedKb& kb() const { return nkb_; }
  TermContext& ctx() const { return ctx_; }
  // Nodes of the local graph of a non-state (itself included), or of the
  // local graph hanging off a state (its successors' local graphs).
  std::vector<NodeId> localGraph(NodeId v) const;
  FeasibilityProblem ilpProblem(const Node& state,
                                const std::set<int>& extraPins = {}) const;
  void exportDot(std::ostream& os) const;

private:
  void setStatus(NodeId v, NodeStatus s);
  void addEdge(NodeId v, NodeId w);
  void removeEdge(NodeId u, NodeId v);
  void markDirty(NodeId v);
  void markKcc(NodeId v);  // schedules v's home state for a KCC3-5 recheck
  bool applyKCCRepairs();  // drains the KCC3-5 queue; true when a rule fired
  void enqueueStatus(NodeId v);
  void evaluateUPS2(NodeId v);
  void addPin(NodeId state, NodeId succ);
  void noteLocalExpansion(NodeId v);  // clears localOnlyUS of the home state
  NodeId pickNode();
  void expandChosen(NodeId v);
  bool feasibleNow(const Node& state, const std::set<int>& extraPins = {});
  Node& mut(NodeId v) { return nodes_[v]; }
  void trace(const std::string& line);
  std::string nodeName(NodeId v) const;

  TermContext& ctx_;
  const NormalizedKb& nkb_;
  TableauOptions opts_;
  TableauStats stats_;
  std::deque<Node> nodes_;
  NodeId root_ = kNullNode;
  std::map<uint64_t, std::vector<NodeId>> stateIndex_;  // fingerprint -> states
  std::map<NodeId, std::vector<NodeId>> localMembers_;  // atPred -> non-states
  std::deque<NodeId> statusQueue_, dirtyQueue_;
  // Rule worklists; a full graph rescan per rule application is quadratic.
  std::deque<NodeId> usQueue_, kccQueue_, kcc1Queue_, kcc2Queue_;
  // Expansion candidates, valid while no edge is removed and no node turns
  // final (both can cut nodes off from the root); epoch_ tracks that.
  std::deque<NodeId> candBatch_;
  uint64_t epoch_ = 0, candEpoch_ = ~0ull;
  // Scratch visited-marks for graph walks; avoids a set allocation per walk.
  mutable std::vector<uint32_t> visitMark_;
  mutable uint32_t visitStamp_ = 0;
  uint32_t freshStamp() const {
    if (visitMark_.size() < nodes_.size()) visitMark_.resize(nodes_.size(), 0);
    return ++visitStamp_;
  }
  std::mt19937_64 rng_;
};

Verdict checkSatisfiability(TermContext& ctx, const NormalizedKb& nkb,
                            TableauOptions opts = {});

}  // namespace shiq

#endif
