#include "tracelab/parse.hpp"

#include <cctype>
#include <vector>

namespace tracelab {

namespace {

enum class Tok {
  Ident, Int, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Semi, Assign, Plus, Minus, Star, Dot, Colon, Dollar, Prime,
  Eq, Ne, Lt, Le, Gt, Ge, AmpAmp, PipePipe, Bang,
  Chop, FOr, FAnd,   // formula-level chop, or, and
  End
};

struct Token {
  Tok kind;
  std::string text;
  Int value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) {
    size_t i = 0;
    int line = 1, col = 1;
    auto bump = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (src[i + k] == '\n') { line++; col = 1; } else { col++; }
      }
      i += n;
    };
    while (i < src.size()) {
      char c = src[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { bump(1); continue; }
      if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
        while (i < src.size() && src[i] != '\n') bump(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
          j++;
        t.kind = Tok::Ident;
        t.text = src.substr(i, j - i);
        bump(j - i);
        toks_.push_back(t);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) j++;
        t.kind = Tok::Int;
        t.text = src.substr(i, j - i);
        t.value = std::stoll(t.text);
        bump(j - i);
        toks_.push_back(t);
        continue;
      }
      auto two = [&](char a, char b) {
        return c == a && i + 1 < src.size() && src[i + 1] == b;
      };
      if (two(':', '=')) { t.kind = Tok::Assign; bump(2); }
      else if (two('!', '=')) { t.kind = Tok::Ne; bump(2); }
      else if (two('<', '=')) { t.kind = Tok::Le; bump(2); }
      else if (two('>', '=')) { t.kind = Tok::Ge; bump(2); }
      else if (two('&', '&')) { t.kind = Tok::AmpAmp; bump(2); }
      else if (two('|', '|')) { t.kind = Tok::PipePipe; bump(2); }
      else if (two('\\', '/')) { t.kind = Tok::FOr; bump(2); }
      else if (two('/', '\\')) { t.kind = Tok::FAnd; bump(2); }
      else {
        switch (c) {
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case ';': t.kind = Tok::Semi; break;
          case '+': t.kind = Tok::Plus; break;
          case '-': t.kind = Tok::Minus; break;
          case '*': t.kind = Tok::Star; break;
          case '.': t.kind = Tok::Dot; break;
          case ':': t.kind = Tok::Colon; break;
          case '$': t.kind = Tok::Dollar; break;
          case '\'': t.kind = Tok::Prime; break;
          case '=': t.kind = Tok::Eq; break;
          case '<': t.kind = Tok::Lt; break;
          case '>': t.kind = Tok::Gt; break;
          case '!': t.kind = Tok::Bang; break;
          case '^': t.kind = Tok::Chop; break;
          default:
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        bump(1);
      }
      toks_.push_back(t);
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    toks_.push_back(end);
  }

  const std::vector<Token>& tokens() const { return toks_; }

 private:
  std::vector<Token> toks_;
};

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"skip", "diverge", "if",   "then", "else",
                                           "while", "do",      "proc", "main", "mu",
                                           "Id",    "Sb",      "Dec",  "true", "false"};
  return kw.count(s) > 0;
}

class Parser {
 public:
  Parser(const std::string& src, bool allow_svar)
      : lexer_(src), toks_(lexer_.tokens()), allow_svar_(allow_svar) {}

  // ---- entry points -------------------------------------------------------

  Program program() {
    Program p;
    while (at_ident("proc")) {
      expect_ident("proc");
      Token name = expect(Tok::Ident, "procedure name");
      if (is_keyword(name.text))
        throw ParseError("keyword cannot name a procedure: " + name.text, name.line, name.col);
      if (name.text == kAbortProc)
        throw ParseError("'abort' is reserved for diverge", name.line, name.col);
      expect(Tok::LBrace, "'{'");
      StmtPtr body = stmt();
      expect(Tok::RBrace, "'}'");
      p.table.emplace_back(name.text, body);
    }
    expect_ident("main");
    expect(Tok::LBrace, "'{'");
    p.main = stmt();
    expect(Tok::RBrace, "'}'");
    expect(Tok::End, "end of input");
    finish_program(p);
    return p;
  }

  StmtPtr statement_only() {
    StmtPtr s = stmt();
    expect(Tok::End, "end of input");
    // while-desugar procs are not available here; reject stray sugar
    if (!while_procs_.empty())
      throw ParseError("while loops are not allowed in bare statements", 1, 1);
    return s;
  }

  FormulaPtr formula_only() {
    FormulaPtr f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

  BExpPtr bexp_only() {
    BExpPtr b = bexp(false);
    expect(Tok::End, "end of input");
    return b;
  }

  AExpPtr aexp_only() {
    AExpPtr a = aexp(false);
    expect(Tok::End, "end of input");
    return a;
  }

 private:
  Lexer lexer_;
  const std::vector<Token>& toks_;
  size_t pos_ = 0;
  bool allow_svar_;
  bool uses_abort_ = false;
  int while_counter_ = 0;
  ProcTable while_procs_;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("expected " + what, cur().line, cur().col);
  }

  Token expect(Tok k, const std::string& what) {
    if (cur().kind != k) fail(what);
    return toks_[pos_++];
  }

  bool at_ident(const std::string& s) const {
    return cur().kind == Tok::Ident && cur().text == s;
  }

  void expect_ident(const std::string& s) {
    if (!at_ident(s)) fail("'" + s + "'");
    pos_++;
  }

  bool accept(Tok k) {
    if (cur().kind != k) return false;
    pos_++;
    return true;
  }

  // ---- statements ---------------------------------------------------------

  StmtPtr stmt() {
    StmtPtr first = atomic_stmt();
    if (accept(Tok::Semi)) return Statement::seq(first, stmt());
    return first;
  }

  StmtPtr atomic_stmt() {
    const Token& t = cur();
    if (t.kind == Tok::LBrace) {
      pos_++;
      StmtPtr s = stmt();
      expect(Tok::RBrace, "'}'");
      return s;
    }
    if (t.kind == Tok::Dollar) {
      pos_++;
      Token name = expect(Tok::Ident, "statement variable name");
      if (!allow_svar_)
        throw ParseError("statement variables are not allowed in source programs",
                         name.line, name.col);
      return Statement::svar(name.text);
    }
    if (t.kind != Tok::Ident) fail("a statement");
    if (t.text == "skip") { pos_++; return Statement::skip(); }
    if (t.text == "diverge") {
      pos_++;
      uses_abort_ = true;
      return Statement::call(kAbortProc);
    }
    if (t.text == "if") {
      pos_++;
      if (accept(Tok::Star)) {
        expect_ident("then");
        StmtPtr a = stmt();
        expect_ident("else");
        StmtPtr b = stmt();
        return Statement::if_star(a, b);
      }
      BExpPtr g = bexp(false);
      expect_ident("then");
      StmtPtr a = stmt();
      expect_ident("else");
      StmtPtr b = stmt();
      return Statement::if_(g, a, b);
    }
    if (t.text == "while") {
      pos_++;
      BExpPtr g = bexp(false);
      expect_ident("do");
      StmtPtr body = stmt();
      std::string proc = "while" + std::to_string(++while_counter_);
      while_procs_.emplace_back(
          proc, Statement::if_(g, Statement::seq(body, Statement::call(proc)),
                               Statement::skip()));
      return Statement::call(proc);
    }
    if (is_keyword(t.text)) fail("a statement");
    Token name = toks_[pos_++];
    if (accept(Tok::Assign)) return Statement::assign(name.text, aexp(false));
    if (accept(Tok::LParen)) {
      expect(Tok::RParen, "')'");
      if (name.text == kAbortProc) uses_abort_ = true;
      return Statement::call(name.text);
    }
    fail("':=' or '()'");
  }

  void finish_program(Program& p) {
    for (auto& wp : while_procs_) {
      for (const auto& [n, body] : p.table)
        if (n == wp.first)
          throw ParseError("generated loop procedure name collides: " + wp.first, 1, 1);
      p.table.push_back(wp);
    }
    if (uses_abort_ && !lookup_proc(p.table, kAbortProc))
      p.table.emplace_back(kAbortProc, Statement::call(kAbortProc));
    if (auto err = well_formedness_error(p)) throw WellFormedError(*err);
  }

  // ---- arithmetic / boolean expressions ------------------------------------
  // primed: permit x' variables (named-relation bodies)

  AExpPtr aexp(bool primed) {
    AExpPtr a = aterm(primed);
    while (true) {
      if (accept(Tok::Plus)) a = AExp::add(a, aterm(primed));
      else if (accept(Tok::Minus)) a = AExp::sub(a, aterm(primed));
      else return a;
    }
  }

  AExpPtr aterm(bool primed) {
    AExpPtr a = afactor(primed);
    while (accept(Tok::Star)) a = AExp::mul(a, afactor(primed));
    return a;
  }

  AExpPtr afactor(bool primed) {
    const Token& t = cur();
    if (t.kind == Tok::Int) { pos_++; return AExp::lit_(t.value); }
    if (t.kind == Tok::Minus) {
      pos_++;
      Token n = expect(Tok::Int, "integer literal");
      return AExp::lit_(-n.value);
    }
    if (t.kind == Tok::LParen) {
      pos_++;
      AExpPtr a = aexp(primed);
      expect(Tok::RParen, "')'");
      return a;
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      pos_++;
      std::string name = t.text;
      if (primed && accept(Tok::Prime)) name += "'";
      return AExp::var_(name);
    }
    fail("an arithmetic expression");
  }

  BExpPtr bexp(bool primed) {
    BExpPtr b = bconj(primed);
    while (accept(Tok::PipePipe)) b = BExp::bor(b, bconj(primed));
    return b;
  }

  BExpPtr bconj(bool primed) {
    BExpPtr b = bneg(primed);
    while (accept(Tok::AmpAmp)) b = BExp::band(b, bneg(primed));
    return b;
  }

  BExpPtr bneg(bool primed) {
    if (accept(Tok::Bang)) return BExp::bnot(bneg(primed));
    return batom(primed);
  }

  BExpPtr batom(bool primed) {
    if (at_ident("true")) { pos_++; return BExp::tru(); }
    if (at_ident("false")) { pos_++; return BExp::fls(); }
    if (cur().kind == Tok::LParen) {
      // either a parenthesized boolean or the left side of a comparison
      size_t saved = pos_;
      try {
        AExpPtr a = aexp(primed);
        return cmp_tail(a, primed);
      } catch (const ParseError&) {
        pos_ = saved;
      }
      expect(Tok::LParen, "'('");
      BExpPtr b = bexp(primed);
      expect(Tok::RParen, "')'");
      return b;
    }
    AExpPtr a = aexp(primed);
    return cmp_tail(a, primed);
  }

  BExpPtr cmp_tail(AExpPtr a, bool primed) {
    CmpOp op;
    switch (cur().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default: fail("a comparison operator");
    }
    pos_++;
    return BExp::cmp(op, a, aexp(primed));
  }

  // ---- trace formulas -----------------------------------------------------
  // Precedence, loosest first: \/  /\  ^ ; mu bodies are parenthesized.

  FormulaPtr formula() {
    FormulaPtr f = fand();
    if (accept(Tok::FOr)) return Formula::or_(f, formula());
    return f;
  }

  FormulaPtr fand() {
    FormulaPtr f = fchop();
    if (accept(Tok::FAnd)) return Formula::and_(f, fand());
    return f;
  }

  FormulaPtr fchop() {
    FormulaPtr f = funit();
    if (accept(Tok::Chop)) return Formula::chop(f, fchop());
    return f;
  }

  FormulaPtr funit() {
    const Token& t = cur();
    if (t.kind == Tok::Ident && t.text == "mu") {
      pos_++;
      Token name = expect(Tok::Ident, "recursion variable");
      if (is_keyword(name.text))
        throw ParseError("keyword cannot name a recursion variable: " + name.text,
                         name.line, name.col);
      expect(Tok::Dot, "'.'");
      expect(Tok::LParen, "'(' (mu bodies are parenthesized)");
      FormulaPtr body = formula();
      expect(Tok::RParen, "')'");
      return Formula::mu(name.text, body);
    }
    return fatom();
  }

  FormulaPtr fatom() {
    const Token& t = cur();
    if (t.kind == Tok::LParen) {
      pos_++;
      FormulaPtr f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::LBrace) {
      pos_++;
      BExpPtr b = bexp(false);
      expect(Tok::RBrace, "'}'");
      return Formula::state_pred(b);
    }
    if (t.kind == Tok::LBracket) {
      pos_++;
      std::string label;
      if (cur().kind == Tok::Ident && peek().kind == Tok::Colon && !is_keyword(cur().text)) {
        label = cur().text;
        pos_ += 2;
      }
      BExpPtr body = bexp(true);
      expect(Tok::RBracket, "']'");
      return Formula::rel_named(label, body);
    }
    if (t.kind != Tok::Ident) fail("a formula");
    if (t.text == "Id") { pos_++; return Formula::rel_id(); }
    if (t.text == "Sb") {
      pos_++;
      expect(Tok::LBracket, "'['");
      Token var = expect(Tok::Ident, "variable");
      expect(Tok::Assign, "':='");
      AExpPtr e = aexp(false);
      expect(Tok::RBracket, "']'");
      return Formula::rel_sb(var.text, e);
    }
    if (t.text == "Dec") {
      pos_++;
      expect(Tok::LParen, "'('");
      AExpPtr e = aexp(false);
      expect(Tok::RParen, "')'");
      return Formula::rel_dec(e);
    }
    if (is_keyword(t.text)) fail("a formula");
    pos_++;
    return Formula::rvar(t.text);
  }
};

}  // namespace

Program parse_program(const std::string& text) {
  Parser p(text, /*allow_svar=*/false);
  return p.program();
}

FormulaPtr parse_formula(const std::string& text, bool require_closed) {
  Parser p(text, false);
  FormulaPtr f = p.formula_only();
  if (require_closed) {
    auto fv = free_rvars(f);
    if (!fv.empty())
      throw ParseError("unbound recursion variable: " + *fv.begin(), 1, 1);
  }
  return f;
}

StmtPtr parse_statement(const std::string& text, bool allow_svar) {
  Parser p(text, allow_svar);
  return p.statement_only();
}

BExpPtr parse_bexp(const std::string& text) {
  Parser p(text, false);
  return p.bexp_only();
}

AExpPtr parse_aexp(const std::string& text) {
  Parser p(text, false);
  return p.aexp_only();
}

}  // namespace tracelab
