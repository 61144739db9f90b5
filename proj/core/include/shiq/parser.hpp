// Text format for knowledge bases.  Statements end with ';', '#' starts a
// line comment.  See README for the grammar.
#ifndef SHIQ_PARSER_HPP
#define SHIQ_PARSER_HPP

#include <string>
#include <variant>

#include "shiq/kb.hpp"

namespace shiq {

struct ParseError {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  std::string message;
  std::string expected;

  std::string format() const;
};

// Parses a knowledge base.  Concepts are returned raw (pre-NNF); numbers are
// decimal and rejected above 2^60.
std::variant<KnowledgeBase, ParseError> parseKB(TermContext& ctx,
                                                const std::string& source);

// Pretty-prints a KB in the same concrete syntax; parseKB(printKB(kb))
// reproduces the same AST.
std::string printKB(const TermContext& ctx, const KnowledgeBase& kb);

}  // namespace shiq

#endif
