// Command-line driver: `check` decides KB satisfiability, `solve-ilp`
// exercises the feasibility solver on hand-written constraint lists, and
// `closure` prints the closure set of a KB.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "shiq/ilfc.hpp"
#include "shiq/kb.hpp"
#include "shiq/model.hpp"
#include "shiq/parser.hpp"
#include "shiq/tableau.hpp"

namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

std::optional<std::string> readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<shiq::NormalizedKb> loadKb(shiq::TermContext& ctx,
                                         const std::string& path) {
  auto source = readFile(path);
  if (!source) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  auto parsed = shiq::parseKB(ctx, *source);
  if (auto* err = std::get_if<shiq::ParseError>(&parsed)) {
    std::cerr << path << ": " << err->format() << "\n";
    return std::nullopt;
  }
  try {
    return shiq::normalizeKb(ctx, std::get<shiq::KnowledgeBase>(parsed));
  } catch (const shiq::KbError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

void printStats(const shiq::TableauStats& st) {
  std::cout << "stats: nodes=" << st.nodesCreated
            << " proxy-hits=" << st.proxyHits
            << " ilp-checks=" << st.ilpChecks << "\n";
  for (const auto& [rule, n] : st.ruleApplications)
    std::cout << "stats: rule " << rule << " x" << n << "\n";
}

int runCheck(const std::string& path, bool stats, bool traceOn,
             const std::string& dotPath, const std::string& modelPath,
             uint64_t modelDepth, uint64_t maxNodes,
             std::optional<uint64_t> seed) {
  shiq::TermContext ctx;
  auto nkb = loadKb(ctx, path);
  if (!nkb) return kExitInput;

  shiq::TableauOptions opts;
  opts.maxNodes = maxNodes;
  opts.seed = seed;
  if (traceOn) opts.trace = &std::cerr;

  shiq::Tableau tableau(ctx, *nkb, opts);
  shiq::Verdict verdict;
  try {
    verdict = tableau.run();
  } catch (const shiq::KbError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  if (!dotPath.empty()) {
    std::ofstream dot(dotPath);
    if (!dot) {
      std::cerr << "error: cannot write " << dotPath << "\n";
      return kExitInput;
    }
    tableau.exportDot(dot);
  }
  if (stats) printStats(tableau.stats());

  switch (verdict) {
    case shiq::Verdict::ResourceLimit:
      std::cerr << "error: node budget exhausted (" << maxNodes << ")\n";
      return kExitResource;
    case shiq::Verdict::Unsat:
      std::cout << "RESULT: UNSAT\n";
      return kExitUnsat;
    case shiq::Verdict::Sat:
      break;
  }

  if (!modelPath.empty()) {
    std::ofstream out(modelPath);
    if (!out) {
      std::cerr << "error: cannot write " << modelPath << "\n";
      return kExitInput;
    }
    shiq::ModelOptions mopts;
    mopts.depthCap = modelDepth;
    auto graph = shiq::extractModel(tableau, mopts);
    auto interp = shiq::correspondingModel(ctx, graph, nkb->rbox);
    shiq::writeModel(out, ctx, interp);
    auto report = shiq::verifyModel(ctx, interp, *nkb);
    for (const auto& c : report.checks)
      if (c.status != shiq::CheckStatus::Pass)
        std::cerr << "model check " << shiq::checkStatusWord(c.status) << ": "
                  << c.description << "\n";
  }

  std::cout << "RESULT: SAT\n";
  return kExitSat;
}

// One constraint per line: `x1 + x3 >= 2` or `x2 <= 5`.  Blank lines and
// `#` comments are skipped.  Variables are x1, x2, ... (1-based in the
// text, dense internally).
std::optional<shiq::FeasibilityProblem> parseIlp(std::istream& in,
                                                 std::string& err) {
  shiq::FeasibilityProblem p;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    shiq::LinearConstraint c;
    bool sawRel = false;
    while (ls >> tok) {
      if (tok == "+") continue;
      if (tok == "<=" || tok == ">=") {
        c.rel = tok == "<=" ? shiq::Rel::Le : shiq::Rel::Ge;
        if (!(ls >> c.bound)) {
          err = "line " + std::to_string(lineNo) + ": missing bound";
          return std::nullopt;
        }
        sawRel = true;
        continue;
      }
      if (sawRel || tok.size() < 2 || tok[0] != 'x') {
        err = "line " + std::to_string(lineNo) + ": unexpected token '" +
              tok + "'";
        return std::nullopt;
      }
      int v = 0;
      try {
        v = std::stoi(tok.substr(1));
      } catch (...) {
        v = 0;
      }
      if (v < 1) {
        err = "line " + std::to_string(lineNo) + ": bad variable '" + tok +
              "'";
        return std::nullopt;
      }
      c.vars.push_back(v - 1);
      p.numVars = std::max(p.numVars, v);
    }
    if (c.vars.empty()) continue;
    if (!sawRel) {
      err = "line " + std::to_string(lineNo) + ": missing <= or >=";
      return std::nullopt;
    }
    std::sort(c.vars.begin(), c.vars.end());
    c.vars.erase(std::unique(c.vars.begin(), c.vars.end()), c.vars.end());
    p.constraints.push_back(std::move(c));
  }
  return p;
}

int runSolveIlp(const std::string& path) {
  std::string err;
  std::optional<shiq::FeasibilityProblem> p;
  if (path.empty() || path == "-") {
    p = parseIlp(std::cin, err);
  } else {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot read " << path << "\n";
      return kExitInput;
    }
    p = parseIlp(in, err);
  }
  if (!p) {
    std::cerr << "error: " << err << "\n";
    return kExitInput;
  }
  auto solution = shiq::findSolution(*p);
  if (!solution) {
    std::cout << "INFEASIBLE\n";
    return kExitUnsat;
  }
  std::cout << "FEASIBLE\n";
  for (size_t i = 0; i < solution->size(); ++i)
    std::cout << "x" << (i + 1) << " = " << (*solution)[i] << "\n";
  return kExitSat;
}

int runClosure(const std::string& path) {
  shiq::TermContext ctx;
  auto nkb = loadKb(ctx, path);
  if (!nkb) return kExitInput;
  auto cs = shiq::closureSet(ctx, *nkb);
  for (const auto& f : cs) std::cout << shiq::formulaToString(ctx, f) << "\n";
  std::cout << "closure size: " << cs.size()
            << " (kb size " << shiq::kbSize(ctx, nkb->kb) << ")\n";
  return kExitSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SHIQ knowledge-base satisfiability checker"};
  app.require_subcommand(1);

  std::string kbPath, dotPath, modelPath, ilpPath;
  bool stats = false, traceOn = false;
  uint64_t modelDepth = 32, maxNodes = 1'000'000;
  std::optional<uint64_t> seed;
  uint64_t seedValue = 0;

  auto* check = app.add_subcommand("check", "decide KB satisfiability");
  check->add_option("kb", kbPath, "knowledge-base file")->required();
  check->add_flag("--stats", stats, "print search statistics");
  check->add_flag("--trace", traceOn, "trace rule applications to stderr");
  check->add_option("--dot", dotPath, "write the tableau graph as DOT");
  check->add_option("--model", modelPath, "write an extracted model (SAT only)");
  check->add_option("--model-depth", modelDepth, "model extraction depth cap")
      ->default_val(32);
  check->add_option("--max-nodes", maxNodes, "tableau node budget")
      ->default_val(1'000'000);
  auto* seedOpt =
      check->add_option("--seed", seedValue,
                        "random node-selection seed (omitted = FIFO)");

  auto* ilp = app.add_subcommand("solve-ilp",
                                 "decide a constraint list (x1 + x3 >= 2)");
  ilp->add_option("file", ilpPath, "constraint file ('-' or omitted = stdin)");

  auto* closure = app.add_subcommand("closure", "print the closure set");
  closure->add_option("kb", kbPath, "knowledge-base file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitSat : kExitInput;
  }

  if (seedOpt->count() > 0) seed = seedValue;

  try {
    if (check->parsed())
      return runCheck(kbPath, stats, traceOn, dotPath, modelPath, modelDepth,
                      maxNodes, seed);
    if (ilp->parsed()) return runSolveIlp(ilpPath);
    if (closure->parsed()) return runClosure(kbPath);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
