// Integer linear feasibility over the naturals for constraint systems with
// 0/1 coefficients: conjunctions of (sum of variables) <= b or >= b, plus
// variables pinned to zero.  Decided by bound preprocessing followed by
// branch and bound with interval propagation, so bounds may be huge (the
// search bisects intervals instead of enumerating values).
#ifndef SHIQ_ILFC_HPP
#define SHIQ_ILFC_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace shiq {

enum class Rel : uint8_t { Le, Ge };

struct LinearConstraint {
  std::vector<int> vars;  // sorted, unique variable indexes
  Rel rel = Rel::Ge;
  uint64_t bound = 0;

  bool operator==(const LinearConstraint& o) const {
    return rel == o.rel && bound == o.bound && vars == o.vars;
  }
  bool operator<(const LinearConstraint& o) const {
    if (rel != o.rel) return rel < o.rel;
    if (bound != o.bound) return bound < o.bound;
    return vars < o.vars;
  }
};

struct FeasibilityProblem {
  int numVars = 0;
  std::vector<LinearConstraint> constraints;
  std::set<int> pinnedZero;
};

// Result of preprocessing: either the problem is already decided, or a
// reduced search problem remains.  Variables are renumbered densely;
// `origVar[i]` maps a reduced variable back to its original index.
struct PreprocessedProblem {
  bool decided = false;
  bool feasible = false;  // meaningful when decided
  std::vector<int> origVar;
  std::vector<uint64_t> upperBound;  // per reduced variable
  std::vector<LinearConstraint> constraints;  // over reduced variables
};

// Eliminates pinned variables, derives per-variable upper bounds from the
// <=-constraints, drops >=-constraints containing a variable with no upper
// bound (always satisfiable by pushing that variable up) and detects
// trivially decided systems.
PreprocessedProblem preprocess(const FeasibilityProblem& p);

bool isFeasible(const FeasibilityProblem& p);

// A satisfying assignment for all original variables (pinned ones get 0), or
// nullopt when infeasible.  Deterministic; prefers small values.
std::optional<std::vector<uint64_t>> findSolution(const FeasibilityProblem& p);

}  // namespace shiq

#endif
