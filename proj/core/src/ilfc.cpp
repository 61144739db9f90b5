#include "shiq/ilfc.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>

namespace shiq {

namespace {

constexpr uint64_t kInf = std::numeric_limits<uint64_t>::max();

uint64_t satAdd(uint64_t a, uint64_t b) {
  return a > kInf - b ? kInf : a + b;
}

struct Search {
  const std::vector<uint64_t>& ub;
  const std::vector<LinearConstraint>& cs;
  std::vector<int> order;  // branching order

  std::vector<uint64_t> lo, hi;

  explicit Search(const PreprocessedProblem& p)
      : ub(p.upperBound), cs(p.constraints) {
    size_t n = ub.size();
    lo.assign(n, 0);
    hi = ub;
    std::vector<int> participation(n, 0);
    for (const auto& c : cs)
      for (int v : c.vars) participation[v]++;
    order.resize(n);
    for (size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return participation[a] > participation[b];
    });
  }

  // Interval propagation to fixpoint; false on an empty interval or a
  // violated constraint.
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : cs) {
        if (c.rel == Rel::Le) {
          uint64_t sumLo = 0;
          for (int v : c.vars) sumLo = satAdd(sumLo, lo[v]);
          if (sumLo > c.bound) return false;
          for (int v : c.vars) {
            uint64_t others = sumLo - lo[v];
            uint64_t cap = c.bound - others;  // others <= bound here
            if (hi[v] > cap) {
              hi[v] = cap;
              changed = true;
            }
          }
        } else {
          uint64_t sumHi = 0;
          for (int v : c.vars) sumHi = satAdd(sumHi, hi[v]);
          if (sumHi < c.bound) return false;
          for (int v : c.vars) {
            if (sumHi == kInf) break;  // no useful lower bound derivable
            uint64_t others = sumHi - hi[v];
            if (c.bound > others) {
              uint64_t need = c.bound - others;
              if (lo[v] < need) {
                lo[v] = need;
                changed = true;
              }
            }
          }
        }
      }
      for (size_t v = 0; v < lo.size(); ++v)
        if (lo[v] > hi[v]) return false;
      // Surrogate cut: a >=-constraint is capped by any <=-constraint plus
      // the upper bounds of its variables outside that constraint.  Plain
      // interval narrowing cannot see this joint bound (e.g. a >=-constraint
      // whose variables all occur in a <=-constraint with a smaller bound).
      for (const auto& g : cs) {
        if (g.rel != Rel::Ge) continue;
        for (const auto& l : cs) {
          if (l.rel != Rel::Le) continue;
          uint64_t cap = l.bound;
          for (int v : g.vars)
            if (!std::binary_search(l.vars.begin(), l.vars.end(), v))
              cap = satAdd(cap, hi[v]);
          if (cap < g.bound) return false;
        }
      }
    }
    return true;
  }

  int pickVar() const {
    for (int v : order)
      if (lo[v] < hi[v]) return v;
    return -1;
  }

  // Depth-first search with bisection branching, lower half first.
  bool solve() {
    if (!propagate()) return false;
    int v = pickVar();
    if (v < 0) return true;  // all singletons; propagate() verified them
    uint64_t mid = lo[v] + (hi[v] - lo[v]) / 2;
    std::vector<uint64_t> saveLo = lo, saveHi = hi;
    hi[v] = mid;
    if (solve()) return true;
    lo = saveLo;
    hi = saveHi;
    lo[v] = mid + 1;
    return solve();
  }
};

}  // namespace

PreprocessedProblem preprocess(const FeasibilityProblem& p) {
  PreprocessedProblem out;

  // Eliminate pinned variables and constant constraints.
  std::vector<LinearConstraint> work;
  for (const auto& c : p.constraints) {
    LinearConstraint r;
    r.rel = c.rel;
    r.bound = c.bound;
    for (int v : c.vars)
      if (p.pinnedZero.count(v) == 0) r.vars.push_back(v);
    if (r.vars.empty()) {
      if (r.rel == Rel::Ge && r.bound > 0) {
        out.decided = true;
        out.feasible = false;
        return out;
      }
      continue;  // 0 <= b or 0 >= 0: vacuous
    }
    if (r.rel == Rel::Ge && r.bound == 0) continue;
    work.push_back(std::move(r));
  }

  // Upper bounds from <=-constraints.
  std::map<int, uint64_t> bound;
  for (const auto& c : work)
    if (c.rel == Rel::Le)
      for (int v : c.vars) {
        auto it = bound.find(v);
        if (it == bound.end() || it->second > c.bound) bound[v] = c.bound;
      }

  // >=-constraints with an unbounded variable are satisfiable on their own.
  std::vector<LinearConstraint> kept;
  for (auto& c : work) {
    if (c.rel == Rel::Ge) {
      bool unbounded = false;
      for (int v : c.vars)
        if (bound.find(v) == bound.end()) unbounded = true;
      if (unbounded) continue;
    }
    kept.push_back(std::move(c));
  }

  // Dense renumbering of the remaining variables.
  std::map<int, int> varMap;
  for (const auto& c : kept)
    for (int v : c.vars)
      if (varMap.emplace(v, 0).second) {}
  int next = 0;
  for (auto& [orig, idx] : varMap) {
    idx = next++;
    out.origVar.push_back(orig);
  }
  out.upperBound.assign(varMap.size(), kInf);
  for (auto& [orig, idx] : varMap) {
    auto it = bound.find(orig);
    if (it != bound.end()) out.upperBound[idx] = it->second;
  }

  for (auto& c : kept) {
    LinearConstraint r;
    r.rel = c.rel;
    r.bound = c.bound;
    for (int v : c.vars) r.vars.push_back(varMap[v]);
    std::sort(r.vars.begin(), r.vars.end());
    // Quick infeasibility / vacuity checks against the variable bounds.
    uint64_t cap = 0;
    for (int v : r.vars) cap = satAdd(cap, out.upperBound[v]);
    if (r.rel == Rel::Ge) {
      if (cap < r.bound) {
        out.decided = true;
        out.feasible = false;
        return out;
      }
    } else if (cap <= r.bound) {
      continue;  // can never be violated
    }
    out.constraints.push_back(std::move(r));
  }

  if (out.constraints.empty()) {
    out.decided = true;
    out.feasible = true;
  }
  return out;
}

bool isFeasible(const FeasibilityProblem& p) {
  PreprocessedProblem pp = preprocess(p);
  if (pp.decided) return pp.feasible;
  Search s(pp);
  return s.solve();
}

std::optional<std::vector<uint64_t>> findSolution(const FeasibilityProblem& p) {
  PreprocessedProblem pp = preprocess(p);
  std::vector<uint64_t> sol(p.numVars, 0);
  if (pp.decided) {
    if (!pp.feasible) return std::nullopt;
  } else {
    Search s(pp);
    if (!s.solve()) return std::nullopt;
    for (size_t i = 0; i < pp.origVar.size(); ++i) sol[pp.origVar[i]] = s.lo[i];
  }

  // Repair >=-constraints that preprocessing dropped because they contain a
  // variable with no upper bound: raise such a variable to cover the deficit.
  // That variable occurs in no <=-constraint, so raising it is always safe.
  for (const auto& c : p.constraints) {
    if (c.rel != Rel::Ge) continue;
    uint64_t lhs = 0;
    for (int v : c.vars) lhs = satAdd(lhs, sol[v]);
    if (lhs >= c.bound) continue;
    int free = -1;
    for (int v : c.vars) {
      if (p.pinnedZero.count(v) != 0) continue;
      bool bounded = false;
      for (const auto& d : p.constraints)
        if (d.rel == Rel::Le &&
            std::binary_search(d.vars.begin(), d.vars.end(), v))
          bounded = true;
      if (!bounded) {
        free = v;
        break;
      }
    }
    assert(free >= 0 && "unsatisfied constraint must have a free variable");
    sol[free] = satAdd(sol[free], c.bound - lhs);
  }

#ifndef NDEBUG
  for (const auto& c : p.constraints) {
    uint64_t lhs = 0;
    for (int v : c.vars) lhs = satAdd(lhs, sol[v]);
    assert(c.rel == Rel::Le ? lhs <= c.bound : lhs >= c.bound);
  }
  for (int v : p.pinnedZero)
    assert(v >= p.numVars || sol[v] == 0);
#endif
  return sol;
}

}  // namespace shiq
