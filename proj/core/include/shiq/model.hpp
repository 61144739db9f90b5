// Model extraction from an open tableau: saturation paths, the model-graph
// (Hintikka structure) construction, the corresponding interpretation, and a
// three-valued verifier that evaluates the knowledge base in the extracted
// interpretation.
#ifndef SHIQ_MODEL_HPP
#define SHIQ_MODEL_HPP

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shiq/kb.hpp"
#include "shiq/tableau.hpp"

namespace shiq {

// A Hintikka structure: finite domain, individual assignment, per-element
// concept sets and per-role edge relations.  `frontier` holds elements whose
// successors were truncated by the depth cap or element budget; the graph is
// exact iff the frontier is empty.
struct ModelGraph {
  size_t domainSize = 0;
  std::map<Indiv, int> indivMap;
  std::vector<std::set<ConceptId>> concepts;
  std::map<Role, std::set<std::pair<int, int>>> edges;
  std::set<int> frontier;

  bool exact() const { return frontier.empty(); }
};

// A concrete interpretation read off a model graph: atomic-concept and
// role-name extensions (role relations closed under subroles/transitivity).
struct Interpretation {
  size_t domainSize = 0;
  std::map<Indiv, int> indivMap;
  std::map<NameId, std::set<int>> atomExt;
  std::map<NameId, std::set<std::pair<int, int>>> roleExt;
  std::set<int> frontier;
};

enum class CheckStatus { Pass, Fail, Unknown };

struct CheckResult {
  std::string description;
  CheckStatus status = CheckStatus::Pass;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;        // no failures
  bool definite() const;  // no failures and no unknowns
};

struct ModelOptions {
  uint64_t depthCap = 32;
  uint64_t maxElements = 100'000;
};

// The settled nodes of a finished tableau: the greatest set of open or
// f-expanded nodes where every non-state keeps a settled successor and every
// state keeps its testing successors settled and its constraints feasible
// with the unsettled feasibility successors pinned to zero.  Model extraction
// never leaves this set.
std::vector<char> settledNodes(const Tableau& t);

// The deterministic saturation path starting at settled non-state v: settled
// non-states (lowest eligible successor id first, with backtracking) ending
// at a settled state.  Throws KbError when no such path exists, which
// indicates a violated tableau invariant.
std::vector<NodeId> saturationPath(const Tableau& t, NodeId v,
                                   const std::vector<char>& settled);
std::vector<NodeId> saturationPath(const Tableau& t, NodeId v);

// Extracts a model graph from a finished tableau whose initial node is not
// closed.  Throws KbError when the root is closed.
ModelGraph extractModel(const Tableau& t, const ModelOptions& opts = {});

// Consistency/saturation violations of the model graph, restricted to
// non-frontier elements.  Empty for a correct extraction.
std::vector<std::string> saturationViolations(TermContext& ctx,
                                              const ModelGraph& m,
                                              const RBoxClosure& rc);

// The corresponding interpretation: role extensions are the least relations
// containing the model-graph edges and closed under subrole inclusion and
// transitivity.
Interpretation correspondingModel(TermContext& ctx, const ModelGraph& m,
                                  const RBoxClosure& rc);

// Evaluates every ABox assertion, every internalized TBox concept at every
// element and every RBox axiom in the interpretation.  Evaluation that
// depends on truncated successors yields "unknown" instead of "fail".
VerifyReport verifyModel(TermContext& ctx, const Interpretation& i,
                         const NormalizedKb& nkb);

// Line-oriented export: element/individual/concept/role lines plus comment
// lines (starting with '#') for frontier information.
void writeModel(std::ostream& os, const TermContext& ctx,
                const Interpretation& i);

std::string checkStatusWord(CheckStatus s);

}  // namespace shiq

#endif
