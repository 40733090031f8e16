#include "seqsl/parser.hpp"

#include <cctype>
#include <set>

#include "seqsl/errors.hpp"
#include "seqsl/macros.hpp"

namespace seqsl {

namespace {

enum class Tok { Ident, SeqVar, Number, Hash, Sym, LParen, RParen, Comma, Dot, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

const std::set<std::string> kKeywords = {"emp", "true", "false", "eps", "nil", "exists", "forall"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& s) {
  static const char* kSyms[] = {"|->", "\\/", "/\\", "-*", "-o", "=>", "==", "!=", "~>", "~", "*", "=", "^"};
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, s.substr(start, i - start), start});
      continue;
    }
    if (c == '@') {
      ++i;
      if (i >= s.size() || !ident_start(s[i])) throw ParseError("expected sequence variable name", start);
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::SeqVar, s.substr(start + 1, i - start - 1), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Number, s.substr(start, i - start), start});
      continue;
    }
    switch (c) {
      case '#':
        out.push_back({Tok::Hash, "#", start});
        ++i;
        continue;
      case '(':
        out.push_back({Tok::LParen, "(", start});
        ++i;
        continue;
      case ')':
        out.push_back({Tok::RParen, ")", start});
        ++i;
        continue;
      case ',':
        out.push_back({Tok::Comma, ",", start});
        ++i;
        continue;
      case '.':
        out.push_back({Tok::Dot, ".", start});
        ++i;
        continue;
      default:
        break;
    }
    bool matched = false;
    for (const char* sym : kSyms) {
      std::string t(sym);
      if (s.compare(i, t.size(), t) == 0) {
        out.push_back({Tok::Sym, t, start});
        i += t.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("undeclared operator '") + c + "'", start);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Formula formula_eof() {
    Formula f = implies();
    expect_end();
    return f;
  }

  SeqTerm seq_eof() {
    SeqTerm t = seq();
    expect_end();
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool is_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool is_kw(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.pos);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }

  Formula implies() {
    Formula l = disj();
    if (is_sym("=>")) {
      ++pos_;
      return mk::implies(l, implies());
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    while (is_sym("\\/")) {
      ++pos_;
      l = mk::or_(l, conj());
    }
    return l;
  }

  Formula conj() {
    Formula l = wand();
    while (is_sym("/\\")) {
      ++pos_;
      l = mk::and_(l, wand());
    }
    return l;
  }

  Formula wand() {
    Formula l = sep();
    if (is_sym("-*")) {
      ++pos_;
      return mk::wand(l, wand());
    }
    if (is_sym("-o")) {
      ++pos_;
      return mk::macro("septraction", {MacroArg::of_form(l), MacroArg::of_form(wand())});
    }
    return l;
  }

  Formula sep() {
    Formula l = unary();
    while (is_sym("*")) {
      ++pos_;
      l = mk::sep(l, unary());
    }
    return l;
  }

  Formula unary() {
    if (is_sym("~")) {
      ++pos_;
      return mk::not_(unary());
    }
    if (is_kw("exists") || is_kw("forall")) return quantifier();
    return atom();
  }

  Formula quantifier() {
    bool universal = peek().text == "forall";
    ++pos_;
    std::vector<std::pair<bool, std::string>> vars;
    while (peek().kind == Tok::Ident || peek().kind == Tok::SeqVar) {
      if (peek().kind == Tok::Ident && kKeywords.count(peek().text)) fail("expected variable");
      vars.emplace_back(peek().kind == Tok::SeqVar, peek().text);
      ++pos_;
    }
    if (vars.empty()) fail("expected variable after quantifier");
    expect(Tok::Dot, "'.'");
    Formula body = implies();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      if (universal)
        body = it->first ? mk::forall_seq(it->second, body) : mk::forall_prog(it->second, body);
      else
        body = it->first ? mk::exists_seq(it->second, body) : mk::exists_prog(it->second, body);
    }
    return body;
  }

  Formula atom() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "emp") return ++pos_, mk::emp();
      if (t.text == "true") return ++pos_, mk::true_();
      if (t.text == "false") return ++pos_, mk::false_();
      if (peek(1).kind == Tok::LParen && !kKeywords.count(t.text)) return macro_call();
    }
    if (t.kind == Tok::LParen) {
      std::size_t save = pos_;
      try {
        return relation();
      } catch (const ParseError&) {
        pos_ = save;
      }
      ++pos_;
      Formula f = implies();
      expect(Tok::RParen, "')'");
      return f;
    }
    return relation();
  }

  Formula macro_call() {
    const Token& name = peek();
    const auto* sig = macro_signature(name.text);
    if (!sig) fail("unknown macro '" + name.text + "'");
    std::string macro = name.text;
    pos_ += 2;
    std::vector<MacroArg> args;
    for (std::size_t i = 0; i < sig->size(); ++i) {
      if (i) expect(Tok::Comma, "','");
      switch ((*sig)[i]) {
        case MacroArg::Sort::Ind:
          args.push_back(MacroArg::of_ind(ind()));
          break;
        case MacroArg::Sort::Seq:
          args.push_back(MacroArg::of_seq(seq()));
          break;
        case MacroArg::Sort::Nat:
          args.push_back(MacroArg::of_nat(number()));
          break;
        case MacroArg::Sort::Form:
          args.push_back(MacroArg::of_form(implies()));
          break;
      }
    }
    if (peek().kind == Tok::Comma)
      fail("macro " + macro + " takes " + std::to_string(sig->size()) + " arguments");
    expect(Tok::RParen, "')'");
    return mk::macro(macro, std::move(args));
  }

  Formula relation() {
    std::size_t at = peek().pos;
    SeqTerm lhs = seq();
    if (peek().kind != Tok::Sym) fail("expected relation");
    std::string op = peek().text;
    if (op == "|->" || op == "~>") {
      if (!lhs.is_single_ind()) throw ParseError("left of " + op + " must be an individual term", at);
      ++pos_;
      SeqTerm rhs = seq();
      if (op == "|->") return mk::points_to(lhs.ind(), rhs);
      return mk::macro("hook", {MacroArg::of_ind(lhs.ind()), MacroArg::of_seq(rhs)});
    }
    if (op != "=" && op != "==" && op != "!=") fail("expected relation");
    ++pos_;
    SeqTerm rhs = seq();
    bool inds = lhs.is_single_ind() && rhs.is_single_ind();
    if (op == "=") {
      if (!inds) throw ParseError("'=' compares individual terms; use '==' for sequences", at);
      return mk::ind_eq(lhs.ind(), rhs.ind());
    }
    if (op == "==") return mk::seq_eq(lhs, rhs);
    return inds ? mk::ind_ne(lhs.ind(), rhs.ind()) : mk::not_(mk::seq_eq(lhs, rhs));
  }

  std::uint64_t number() {
    if (peek().kind != Tok::Number) fail("expected natural number");
    Value v = Value::nat(0);
    try {
      v = parse_value(peek().text);
    } catch (const std::invalid_argument&) {
      fail("natural number out of range");
    }
    ++pos_;
    return v.nat_value();
  }

  IndTerm ind() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Hash:
        ++pos_;
        return IndTerm::hash();
      case Tok::Number:
        return IndTerm::nat(number());
      case Tok::Ident:
        if (t.text == "nil") return ++pos_, IndTerm::nil();
        if (kKeywords.count(t.text)) fail("expected individual term");
        ++pos_;
        return IndTerm::var(t.text);
      default:
        fail("expected individual term");
    }
  }

  SeqTerm seq() {
    SeqTerm l = seq_primary();
    while (is_sym("^")) {
      ++pos_;
      l = SeqTerm::concat(l, seq_primary());
    }
    return l;
  }

  SeqTerm seq_primary() {
    const Token& t = peek();
    if (t.kind == Tok::SeqVar) {
      ++pos_;
      return SeqTerm::var(t.text);
    }
    if (t.kind == Tok::Ident && t.text == "eps") {
      ++pos_;
      return SeqTerm::empty();
    }
    if (t.kind == Tok::LParen) {
      ++pos_;
      SeqTerm inner = seq();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident && peek(1).kind == Tok::LParen && !kKeywords.count(t.text))
      fail("macro call where a term is expected");
    return SeqTerm::lift(ind());
  }
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).formula_eof(); }

SeqTerm parse_seq_term(const std::string& text) { return Parser(text).seq_eof(); }

}  // namespace seqsl
