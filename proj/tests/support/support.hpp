// Shared helpers for the test binaries: the regression corpus, tableau
// invariant checking, random KB generators and a bounded brute-force
// satisfiability oracle with an independent semantic evaluator.
#ifndef TESTS_SUPPORT_HPP
#define TESTS_SUPPORT_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shiq/kb.hpp"
#include "shiq/model.hpp"
#include "shiq/parser.hpp"
#include "shiq/tableau.hpp"

namespace support {

// A corpus entry: a KB in concrete syntax plus the expected verdict when
// known (true = satisfiable).
struct CorpusEntry {
  std::string name;
  std::string text;
  std::optional<bool> satisfiable;
};

// Hand-written regression KBs, including the three golden examples.
const std::vector<CorpusEntry>& corpus();

std::string readFile(const std::string& path);

// Parses + normalizes, throwing on any error (for KBs known to be valid).
shiq::NormalizedKb loadKb(shiq::TermContext& ctx, const std::string& text);

// Structural invariants of a finished tableau: state-label uniqueness,
// status-lattice monotonicity, label containment in the closure set,
// local-graph acyclicity, at most one re-expansion per non-state.  Returns
// human-readable violations; empty means green.
std::vector<std::string> tableauViolations(const shiq::Tableau& t);

// --- bounded brute-force oracle -------------------------------------------

enum class OracleVerdict { Sat, Unsat, Unknown };

// Exhaustive model search over domains of 1..maxDomain elements.  Intended
// for ALCQ KBs (no inverse roles, no transitivity, no role hierarchy) with a
// handful of symbols; `budget` caps the number of search nodes, returning
// Unknown when exhausted.
OracleVerdict bruteForceSat(shiq::TermContext& ctx,
                            const shiq::NormalizedKb& nkb, int maxDomain,
                            uint64_t budget = 4'000'000);

// Direct two-valued evaluation of the KB in a concrete interpretation,
// written independently of the library verifier.  Only meaningful for exact
// (frontier-free) interpretations.  Returns violated assertions/axioms.
std::vector<std::string> semanticViolations(shiq::TermContext& ctx,
                                            const shiq::Interpretation& i,
                                            const shiq::NormalizedKb& nkb);

// --- random generators -----------------------------------------------------

// Random ALCQ KB (no inverses, no RBox) in concrete syntax: at most
// 3 concept names, 2 roles, numbers <= 3, individuals a/b.
std::string randomAlcqKb(std::mt19937_64& rng);

// Random full-SHIQ KB in concrete syntax, for parser round-trips and
// stability runs (numbers kept small).
std::string randomShiqKb(std::mt19937_64& rng);

}  // namespace support

#endif
