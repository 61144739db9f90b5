#include "shiq/parser.hpp"

#include <cctype>

namespace shiq {

namespace {

constexpr uint64_t kMaxNat = 1ull << 60;

enum class Tok {
  Ident,
  Nat,
  Semi,
  LParen,
  RParen,
  Comma,
  Dot,
  Colon,
  Neq,   // !=
  Geq,   // >=
  Leq,   // <=
  End,
};

struct Token {
  Tok kind;
  std::string text;
  uint64_t num = 0;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  ParseError err;
  bool failed = false;

  explicit Lexer(const std::string& s) : src(s) {}

  void fail(int l, int c, const std::string& msg) {
    if (failed) return;
    failed = true;
    err = ParseError{l, c, msg, ""};
  }

  void advance() {
    if (src[pos] == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    pos++;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos < src.size() && !failed) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string s;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                src[pos] == '_')) {
          s += src[pos];
          advance();
        }
        t.kind = Tok::Ident;
        t.text = std::move(s);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        uint64_t n = 0;
        bool overflow = false;
        while (pos < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[pos]))) {
          uint64_t d = static_cast<uint64_t>(src[pos] - '0');
          if (n > (kMaxNat - d) / 10) overflow = true;
          if (!overflow) n = n * 10 + d;
          advance();
        }
        if (overflow || n > kMaxNat) {
          fail(t.line, t.col, "number exceeds 2^60");
          break;
        }
        t.kind = Tok::Nat;
        t.num = n;
      } else {
        switch (c) {
          case ';': t.kind = Tok::Semi; advance(); break;
          case '(': t.kind = Tok::LParen; advance(); break;
          case ')': t.kind = Tok::RParen; advance(); break;
          case ',': t.kind = Tok::Comma; advance(); break;
          case '.': t.kind = Tok::Dot; advance(); break;
          case ':': t.kind = Tok::Colon; advance(); break;
          case '!':
            advance();
            if (pos >= src.size() || src[pos] != '=') {
              fail(t.line, t.col, "expected '=' after '!'");
              continue;
            }
            advance();
            t.kind = Tok::Neq;
            break;
          case '>':
            advance();
            if (pos >= src.size() || src[pos] != '=') {
              fail(t.line, t.col, "expected '=' after '>'");
              continue;
            }
            advance();
            t.kind = Tok::Geq;
            break;
          case '<':
            advance();
            if (pos >= src.size() || src[pos] != '=') {
              fail(t.line, t.col, "expected '=' after '<'");
              continue;
            }
            advance();
            t.kind = Tok::Leq;
            break;
          default:
            fail(t.line, t.col, std::string("unexpected character '") + c + "'");
            continue;
        }
      }
      out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
  }
};

bool isKeyword(const std::string& s) {
  return s == "trans" || s == "sub" || s == "equiv" || s == "assert" ||
         s == "inv" || s == "Top" || s == "Bottom" || s == "not" ||
         s == "and" || s == "or" || s == "some" || s == "all";
}

struct Parser {
  TermContext& ctx;
  std::vector<Token> toks;
  size_t i = 0;
  ParseError err;
  bool failed = false;

  Parser(TermContext& c, std::vector<Token> t) : ctx(c), toks(std::move(t)) {}

  const Token& cur() const { return toks[i]; }
  const Token& peek(size_t k) const {
    return toks[std::min(i + k, toks.size() - 1)];
  }

  bool fail(const std::string& msg, const std::string& expected = "") {
    if (!failed) {
      failed = true;
      err = ParseError{cur().line, cur().col, msg, expected};
    }
    return false;
  }

  bool isIdent(const Token& t, const char* kw = nullptr) const {
    if (t.kind != Tok::Ident) return false;
    return kw == nullptr ? !isKeyword(t.text) : t.text == kw;
  }

  bool expect(Tok k, const std::string& what) {
    if (cur().kind != k) return fail("expected " + what, what);
    i++;
    return true;
  }

  bool expectKw(const char* kw) {
    if (!isIdent(cur(), kw)) return fail(std::string("expected '") + kw + "'", kw);
    i++;
    return true;
  }

  bool name(const std::string& what, std::string& out) {
    if (cur().kind != Tok::Ident || isKeyword(cur().text))
      return fail("expected " + what, "identifier");
    out = cur().text;
    i++;
    return true;
  }

  // role := IDENT | "inv" "(" IDENT ")"
  bool parseRole(Role& out) {
    if (isIdent(cur(), "inv")) {
      i++;
      std::string n;
      if (!expect(Tok::LParen, "'('") || !name("role name", n) ||
          !expect(Tok::RParen, "')'"))
        return false;
      out = Role(ctx.roleNames().intern(n), true);
      return true;
    }
    std::string n;
    if (!name("role name", n)) return false;
    out = Role(ctx.roleNames().intern(n), false);
    return true;
  }

  // Looks ahead without consuming: does a role start here, i.e. a plain
  // identifier or inv(IDENT)?
  bool looksLikeRoleAt(size_t k, size_t& len) const {
    if (isIdent(peek(k))) {
      len = 1;
      return true;
    }
    if (isIdent(peek(k), "inv") && peek(k + 1).kind == Tok::LParen &&
        isIdent(peek(k + 2)) && peek(k + 3).kind == Tok::RParen) {
      len = 4;
      return true;
    }
    return false;
  }

  // concept := orExpr; quantifier bodies extend greedily to the right.
  bool parseConcept(ConceptId& out) { return parseOr(out); }

  bool parseOr(ConceptId& out) {
    if (!parseAnd(out)) return false;
    while (isIdent(cur(), "or")) {
      i++;
      ConceptId rhs;
      if (!parseAnd(rhs)) return false;
      out = ctx.mkOr(out, rhs);
    }
    return true;
  }

  bool parseAnd(ConceptId& out) {
    if (!parseUnary(out)) return false;
    while (isIdent(cur(), "and")) {
      i++;
      ConceptId rhs;
      if (!parseUnary(rhs)) return false;
      out = ctx.mkAnd(out, rhs);
    }
    return true;
  }

  bool parseQuantBody(Role& r, ConceptId& body) {
    return parseRole(r) && expect(Tok::Dot, "'.'") && parseConcept(body);
  }

  bool parseUnary(ConceptId& out) {
    const Token& t = cur();
    if (isIdent(t, "not")) {
      i++;
      ConceptId c;
      if (!parseUnary(c)) return false;
      out = ctx.mkNot(c);
      return true;
    }
    if (isIdent(t, "some") || isIdent(t, "all")) {
      bool ex = t.text == "some";
      i++;
      Role r;
      ConceptId body;
      if (!parseQuantBody(r, body)) return false;
      out = ex ? ctx.exists(r, body) : ctx.forall(r, body);
      return true;
    }
    if (t.kind == Tok::Geq || t.kind == Tok::Leq) {
      bool atLeast = t.kind == Tok::Geq;
      i++;
      if (cur().kind != Tok::Nat) return fail("expected number", "number");
      uint64_t n = cur().num;
      i++;
      Role r;
      ConceptId body;
      if (!parseQuantBody(r, body)) return false;
      out = atLeast ? ctx.atLeast(n, r, body) : ctx.atMost(n, r, body);
      return true;
    }
    if (isIdent(t, "Top")) {
      i++;
      out = ctx.top();
      return true;
    }
    if (isIdent(t, "Bottom")) {
      i++;
      out = ctx.bottom();
      return true;
    }
    if (t.kind == Tok::LParen) {
      i++;
      if (!parseConcept(out)) return false;
      return expect(Tok::RParen, "')'");
    }
    if (isIdent(t)) {
      out = ctx.atom(ctx.conceptNames().intern(t.text));
      i++;
      return true;
    }
    return fail("expected concept", "concept");
  }

  // assertion := IDENT ":" concept | role "(" IDENT "," IDENT ")"
  //            | IDENT "!=" IDENT
  bool parseAssertion(Formula& out) {
    size_t roleLen;
    if (looksLikeRoleAt(0, roleLen) && peek(roleLen).kind == Tok::LParen) {
      Role r;
      std::string a, b;
      if (!parseRole(r) || !expect(Tok::LParen, "'('") ||
          !name("individual", a) || !expect(Tok::Comma, "','") ||
          !name("individual", b) || !expect(Tok::RParen, "')'"))
        return false;
      out = Formula::roleAssert(r, ctx.individuals().intern(a),
                                ctx.individuals().intern(b));
      return true;
    }
    std::string a;
    if (!name("individual", a)) return false;
    if (cur().kind == Tok::Neq) {
      i++;
      std::string b;
      if (!name("individual", b)) return false;
      out = Formula::distinct(ctx.individuals().intern(a),
                              ctx.individuals().intern(b));
      return true;
    }
    if (!expect(Tok::Colon, "':'")) return false;
    ConceptId c;
    if (!parseConcept(c)) return false;
    out = Formula::conceptAt(ctx.individuals().intern(a), c);
    return true;
  }

  bool parseStmt(KnowledgeBase& kb) {
    if (isIdent(cur(), "trans")) {
      i++;
      Role r;
      if (!expect(Tok::LParen, "'('") || !parseRole(r) ||
          !expect(Tok::RParen, "')'"))
        return false;
      kb.transAxioms.push_back({r});
      return true;
    }
    if (isIdent(cur(), "assert")) {
      i++;
      Formula f;
      if (!parseAssertion(f)) return false;
      kb.abox.push_back(f);
      return true;
    }
    // Disambiguation: `role sub role ;` is a role axiom; anything else that
    // starts a concept is a TBox axiom.  A statement of shape
    // `IDENT sub IDENT ;` is read as a role axiom; write `(A) sub B;` to
    // state an atomic concept subsumption.
    size_t lhsLen, rhsLen;
    if (looksLikeRoleAt(0, lhsLen) && isIdent(peek(lhsLen), "sub") &&
        looksLikeRoleAt(lhsLen + 1, rhsLen) &&
        peek(lhsLen + 1 + rhsLen).kind == Tok::Semi) {
      Role sub, sup;
      if (!parseRole(sub)) return false;
      i++;  // sub keyword
      if (!parseRole(sup)) return false;
      kb.roleAxioms.push_back({sub, sup});
      return true;
    }
    ConceptId lhs;
    if (!parseConcept(lhs)) return false;
    TBoxKind kind;
    if (isIdent(cur(), "sub")) {
      kind = TBoxKind::Subsumption;
    } else if (isIdent(cur(), "equiv")) {
      kind = TBoxKind::Equivalence;
    } else {
      return fail("expected 'sub' or 'equiv'", "sub|equiv");
    }
    i++;
    ConceptId rhs;
    if (!parseConcept(rhs)) return false;
    kb.tbox.push_back({kind, lhs, rhs});
    return true;
  }

  std::variant<KnowledgeBase, ParseError> run() {
    KnowledgeBase kb;
    while (cur().kind != Tok::End) {
      if (!parseStmt(kb)) return err;
      if (!expect(Tok::Semi, "';'")) return err;
    }
    return kb;
  }
};

}  // namespace

std::string ParseError::format() const {
  std::string s = std::to_string(line) + ":" + std::to_string(column) + ": " +
                  message;
  if (!expected.empty()) s += " (expected " + expected + ")";
  return s;
}

std::variant<KnowledgeBase, ParseError> parseKB(TermContext& ctx,
                                                const std::string& source) {
  Lexer lex(source);
  std::vector<Token> toks = lex.run();
  if (lex.failed) return lex.err;
  Parser p(ctx, std::move(toks));
  return p.run();
}

std::string printKB(const TermContext& ctx, const KnowledgeBase& kb) {
  std::string out;
  for (const auto& ax : kb.transAxioms)
    out += "trans(" + ctx.roleToString(ax.role) + ");\n";
  for (const auto& ax : kb.roleAxioms)
    out += ctx.roleToString(ax.sub) + " sub " + ctx.roleToString(ax.sup) +
           ";\n";
  for (const auto& ax : kb.tbox) {
    // Parenthesize the left side so a bare-atom subsumption cannot be
    // re-read as a role axiom.
    std::string lhs = "(" + ctx.conceptToString(ax.lhs) + ")";
    out += lhs + (ax.kind == TBoxKind::Subsumption ? " sub " : " equiv ") +
           ctx.conceptToString(ax.rhs) + ";\n";
  }
  const auto& ind = ctx.individuals();
  for (const Formula& f : kb.abox) {
    switch (f.kind) {
      case FKind::ConceptF:
        out += "assert " + ind.name(f.subject) + " : " +
               ctx.conceptToString(f.conceptId) + ";\n";
        break;
      case FKind::RoleF:
        out += "assert " + ctx.roleToString(f.role) + "(" +
               ind.name(f.subject) + "," + ind.name(f.object) + ");\n";
        break;
      case FKind::Distinct:
        out += "assert " + ind.name(f.subject) + " != " + ind.name(f.object) +
               ";\n";
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace shiq
