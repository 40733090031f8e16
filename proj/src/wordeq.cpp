#include "seqsl/wordeq.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "seqsl/errors.hpp"

namespace seqsl {

struct WordFormula::Node {
  Kind kind = Kind::True;
  WordTerm l, r;
  std::vector<WordFormula> kids;
  std::string var;
};

WordFormula::WordFormula() = default;

const WordFormula::Node& WordFormula::node() const {
  static const Node kTrue;
  return node_ ? *node_ : kTrue;
}

WordFormula WordFormula::eq(WordTerm l, WordTerm r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eq;
  n->l = std::move(l);
  n->r = std::move(r);
  return WordFormula(std::move(n));
}

WordFormula WordFormula::not_(WordFormula a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->kids = {std::move(a)};
  return WordFormula(std::move(n));
}

WordFormula WordFormula::and_(std::vector<WordFormula> kids) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->kids = std::move(kids);
  return WordFormula(std::move(n));
}

WordFormula WordFormula::or_(std::vector<WordFormula> kids) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->kids = std::move(kids);
  return WordFormula(std::move(n));
}

WordFormula WordFormula::true_() { return WordFormula(); }

WordFormula WordFormula::false_() {
  static const WordFormula f = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::False;
    return WordFormula(std::move(n));
  }();
  return f;
}

WordFormula WordFormula::exists(std::string var, WordFormula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exists;
  n->var = std::move(var);
  n->kids = {std::move(body)};
  return WordFormula(std::move(n));
}

WordFormula::Kind WordFormula::kind() const { return node().kind; }
const WordTerm& WordFormula::lhs() const { return node().l; }
const WordTerm& WordFormula::rhs() const { return node().r; }
const std::vector<WordFormula>& WordFormula::kids() const { return node().kids; }
const std::string& WordFormula::var() const { return node().var; }

bool WordFormula::operator==(const WordFormula& o) const {
  if (node_ == o.node_) return true;
  const Node& x = node();
  const Node& y = o.node();
  return x.kind == y.kind && x.l == y.l && x.r == y.r && x.var == y.var && x.kids == y.kids;
}

// ---- simplifying constructors ----

namespace wf {

WordFormula eq(WordTerm l, WordTerm r) {
  std::size_t p = 0;
  while (p < l.size() && p < r.size() && l[p] == r[p]) ++p;
  std::size_t s = 0;
  while (s < l.size() - p && s < r.size() - p && l[l.size() - 1 - s] == r[r.size() - 1 - s]) ++s;
  WordTerm a(l.begin() + static_cast<std::ptrdiff_t>(p), l.end() - static_cast<std::ptrdiff_t>(s));
  WordTerm b(r.begin() + static_cast<std::ptrdiff_t>(p), r.end() - static_cast<std::ptrdiff_t>(s));
  if (a.empty() && b.empty()) return WordFormula::true_();
  auto ground = [](const WordTerm& t) {
    return std::none_of(t.begin(), t.end(), [](const WSym& x) { return x.is_var; });
  };
  if (ground(a) && ground(b)) return WordFormula::false_();
  if (!a.empty() && !b.empty()) {
    if (!a.front().is_var && !b.front().is_var) return WordFormula::false_();
    if (!a.back().is_var && !b.back().is_var) return WordFormula::false_();
  }
  if ((a.empty() && !ground(b)) || (b.empty() && !ground(a))) {
    const WordTerm& t = a.empty() ? b : a;
    if (!ground(t) && std::any_of(t.begin(), t.end(), [](const WSym& x) { return !x.is_var; }))
      return WordFormula::false_();
  }
  return WordFormula::eq(std::move(a), std::move(b));
}

WordFormula not_(WordFormula a) {
  switch (a.kind()) {
    case WordFormula::Kind::True:
      return WordFormula::false_();
    case WordFormula::Kind::False:
      return WordFormula::true_();
    case WordFormula::Kind::Not:
      return a.body();
    default:
      return WordFormula::not_(std::move(a));
  }
}

WordFormula ne(WordTerm l, WordTerm r) { return not_(eq(std::move(l), std::move(r))); }

namespace {

bool is_lit(const WordFormula& f) {
  return f.kind() == WordFormula::Kind::Eq ||
         (f.kind() == WordFormula::Kind::Not && f.body().kind() == WordFormula::Kind::Eq);
}

WordFormula junction(std::vector<WordFormula> kids, bool conj) {
  using K = WordFormula::Kind;
  const K self = conj ? K::And : K::Or;
  const K unit = conj ? K::True : K::False;
  const K zero = conj ? K::False : K::True;
  std::vector<WordFormula> out;
  std::set<std::tuple<bool, WordTerm, WordTerm>> lits;
  std::vector<WordFormula> stack(kids.rbegin(), kids.rend());
  while (!stack.empty()) {
    WordFormula k = std::move(stack.back());
    stack.pop_back();
    if (k.kind() == self) {
      for (auto it = k.kids().rbegin(); it != k.kids().rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (k.kind() == unit) continue;
    if (k.kind() == zero) return k;
    if (is_lit(k)) {
      bool pos = k.kind() == K::Eq;
      const WordFormula& e = pos ? k : k.body();
      if (lits.count({!pos, e.lhs(), e.rhs()})) return conj ? WordFormula::false_() : WordFormula::true_();
      if (!lits.insert({pos, e.lhs(), e.rhs()}).second) continue;
    }
    out.push_back(std::move(k));
  }
  if (out.empty()) return conj ? WordFormula::true_() : WordFormula::false_();
  if (out.size() == 1) return out[0];
  return conj ? WordFormula::and_(std::move(out)) : WordFormula::or_(std::move(out));
}

}  // namespace

WordFormula and_(std::vector<WordFormula> kids) { return junction(std::move(kids), true); }
WordFormula or_(std::vector<WordFormula> kids) { return junction(std::move(kids), false); }

}  // namespace wf

// ---- text format ----

namespace {

class WParser {
 public:
  explicit WParser(const std::string& s) : s_(s) {}

  WordFormula formula_eof() {
    WordFormula f = disj();
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

  WordTerm term_eof() {
    WordTerm t = term();
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(i_, tok.size(), tok) == 0) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  bool word_at(const std::string& w) {
    skip();
    if (s_.compare(i_, w.size(), w) != 0) return false;
    std::size_t e = i_ + w.size();
    return e >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_');
  }

  WordFormula disj() {
    std::vector<WordFormula> ks = {conj()};
    while (eat("|")) ks.push_back(conj());
    return ks.size() == 1 ? ks[0] : WordFormula::or_(std::move(ks));
  }

  WordFormula conj() {
    std::vector<WordFormula> ks = {unary()};
    while (eat("&")) ks.push_back(unary());
    return ks.size() == 1 ? ks[0] : WordFormula::and_(std::move(ks));
  }

  WordFormula unary() {
    skip();
    if (eat("~")) return WordFormula::not_(unary());
    if (eat("(")) {
      WordFormula f = disj();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    if (word_at("true")) {
      i_ += 4;
      return WordFormula::true_();
    }
    if (word_at("false")) {
      i_ += 5;
      return WordFormula::false_();
    }
    if (word_at("exists")) {
      i_ += 6;
      std::vector<std::string> vars;
      skip();
      while (i_ < s_.size() && s_[i_] == '@') {
        vars.push_back(var_name());
        skip();
      }
      if (vars.empty()) fail("expected variable after exists");
      if (!eat(".")) fail("expected '.'");
      WordFormula body = disj();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = WordFormula::exists(*it, body);
      return body;
    }
    WordTerm l = term();
    if (eat("==")) return WordFormula::eq(std::move(l), term());
    if (eat("!=")) return WordFormula::not_(WordFormula::eq(std::move(l), term()));
    fail("expected '==' or '!='");
  }

  std::string var_name() {
    ++i_;
    std::size_t st = i_;
    if (i_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[i_]))) fail("expected variable name");
    while (i_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
      ++i_;
    return s_.substr(st, i_ - st);
  }

  WordTerm term() {
    WordTerm out;
    do {
      skip();
      if (i_ >= s_.size()) fail("expected term");
      char c = s_[i_];
      if (c == '@') {
        out.push_back(WSym::of_var(var_name()));
      } else if (c == '#') {
        ++i_;
        out.push_back(WSym::let(Value::hash()));
      } else if (word_at("nil")) {
        i_ += 3;
        out.push_back(WSym::let(Value::nil()));
      } else if (word_at("eps")) {
        i_ += 3;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t st = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        try {
          out.push_back(WSym::let(parse_value(s_.substr(st, i_ - st))));
        } catch (const std::invalid_argument&) {
          i_ = st;
          fail("natural number out of range");
        }
      } else {
        fail("expected letter or variable");
      }
    } while (eat("^"));
    return out;
  }
};

void print(const WordFormula& f, int ctx, std::string& out) {
  using K = WordFormula::Kind;
  switch (f.kind()) {
    case K::True:
      out += "true";
      return;
    case K::False:
      out += "false";
      return;
    case K::Eq:
      out += to_string(f.lhs()) + " == " + to_string(f.rhs());
      return;
    case K::Not:
      if (f.body().kind() == K::Eq) {
        out += to_string(f.body().lhs()) + " != " + to_string(f.body().rhs());
        return;
      }
      out += "~";
      print(f.body(), 3, out);
      return;
    case K::And:
    case K::Or: {
      int mine = f.kind() == K::Or ? 1 : 2;
      bool paren = ctx > mine;
      if (paren) out += "(";
      for (std::size_t i = 0; i < f.kids().size(); ++i) {
        if (i) out += f.kind() == K::Or ? " | " : " & ";
        print(f.kids()[i], mine + 1, out);
      }
      if (paren) out += ")";
      return;
    }
    case K::Exists: {
      bool paren = ctx > 0;
      if (paren) out += "(";
      out += "exists @" + f.var() + ". ";
      print(f.body(), 0, out);
      if (paren) out += ")";
      return;
    }
  }
}

void collect(const WordFormula& f, std::set<std::string>& vars, std::set<Value>& letters, std::size_t& nodes) {
  ++nodes;
  auto term = [&](const WordTerm& t) {
    for (const auto& x : t)
      if (x.is_var)
        vars.insert(x.var);
      else
        letters.insert(x.letter);
  };
  if (f.kind() == WordFormula::Kind::Eq) {
    term(f.lhs());
    term(f.rhs());
  }
  if (f.kind() == WordFormula::Kind::Exists) vars.insert(f.var());
  for (const auto& k : f.kids()) collect(k, vars, letters, nodes);
}

}  // namespace

WordTerm parse_word_term(const std::string& text) { return WParser(text).term_eof(); }
WordFormula parse_word_formula(const std::string& text) { return WParser(text).formula_eof(); }

std::string to_string(const WordTerm& t) {
  if (t.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += " ^ ";
    out += t[i].is_var ? "@" + t[i].var : t[i].letter.str();
  }
  return out;
}

std::string to_string(const WordFormula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

std::set<std::string> word_vars(const WordFormula& f) {
  std::set<std::string> v;
  std::set<Value> l;
  std::size_t n = 0;
  collect(f, v, l, n);
  return v;
}

Alphabet letters_of(const WordFormula& f) {
  std::set<std::string> v;
  std::set<Value> l;
  std::size_t n = 0;
  collect(f, v, l, n);
  return Alphabet(l.begin(), l.end());
}

std::size_t formula_nodes(const WordFormula& f) {
  std::set<std::string> v;
  std::set<Value> l;
  std::size_t n = 0;
  collect(f, v, l, n);
  return n;
}

Word apply(const WordTerm& t, const Substitution& s) {
  Word out;
  for (const auto& x : t) {
    if (!x.is_var) {
      out.push_back(x.letter);
      continue;
    }
    auto it = s.find(x.var);
    if (it == s.end()) throw UnboundVariable("@" + x.var);
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

bool verify_substitution(const WordFormula& f, const Substitution& s) {
  using K = WordFormula::Kind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Eq:
      return apply(f.lhs(), s) == apply(f.rhs(), s);
    case K::Not:
      return !verify_substitution(f.body(), s);
    case K::And:
      for (const auto& k : f.kids())
        if (!verify_substitution(k, s)) return false;
      return true;
    case K::Or:
      for (const auto& k : f.kids())
        if (verify_substitution(k, s)) return true;
      return false;
    case K::Exists:
      return verify_substitution(f.body(), s);
  }
  return false;
}

std::string status_name(WeStatus s) {
  switch (s) {
    case WeStatus::Sat:
      return "sat";
    case WeStatus::Unsat:
      return "unsat";
    case WeStatus::Unknown:
      break;
  }
  return "unknown";
}

// ---- brute force oracle ----

namespace {

enum class B3 : std::uint8_t { F, T, D };

class Brute {
 public:
  Brute(const WordFormula& f, std::size_t max_len, const Alphabet& sigma) : f_(f), max_len_(max_len), sigma_(sigma) {
    auto vs = word_vars(f);
    names_.assign(vs.begin(), vs.end());
    for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = i;
    val_.resize(names_.size());
    set_.assign(names_.size(), 0);
  }

  SolverVerdict run() {
    SolverVerdict v;
    if (dfs(0)) {
      v.status = WeStatus::Sat;
      for (std::size_t i = 0; i < names_.size(); ++i) v.witness[names_[i]] = val_[i];
      return v;
    }
    if (names_.empty()) {
      v.status = WeStatus::Unsat;
      return v;
    }
    v.status = WeStatus::Unknown;
    v.reason = "no solution with lengths <= " + std::to_string(max_len_);
    return v;
  }

 private:
  const WordFormula& f_;
  std::size_t max_len_;
  const Alphabet& sigma_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::vector<Word> val_;
  std::vector<std::uint8_t> set_;

  // Known prefix up to the first unset variable, known suffix after the last.
  B3 cmp(const WordTerm& l, const WordTerm& r) const {
    Word lp, ls, rp, rs;
    std::size_t lmin = 0, rmin = 0;
    bool lo = side(l, lp, ls, lmin);
    bool ro = side(r, rp, rs, rmin);
    if (!lo && !ro) return lp == rp ? B3::T : B3::F;
    std::size_t n = std::min(lp.size(), rp.size());
    if (!std::equal(lp.begin(), lp.begin() + static_cast<std::ptrdiff_t>(n), rp.begin())) return B3::F;
    const Word& a = lo ? ls : lp;
    const Word& b = ro ? rs : rp;
    n = std::min(a.size(), b.size());
    if (!std::equal(a.end() - static_cast<std::ptrdiff_t>(n), a.end(), b.end() - static_cast<std::ptrdiff_t>(n)))
      return B3::F;
    if (!lo && lp.size() < rmin) return B3::F;
    if (!ro && rp.size() < lmin) return B3::F;
    return B3::D;
  }

  bool side(const WordTerm& t, Word& pre, Word& suf, std::size_t& min) const {
    bool open = false;
    for (const auto& x : t) {
      if (x.is_var) {
        std::size_t i = index_.at(x.var);
        if (!set_[i]) {
          open = true;
          suf.clear();
          continue;
        }
        for (Value v : val_[i]) (open ? suf : pre).push_back(v);
        min += val_[i].size();
      } else {
        (open ? suf : pre).push_back(x.letter);
        ++min;
      }
    }
    return open;
  }

  B3 eval(const WordFormula& f) const {
    using K = WordFormula::Kind;
    switch (f.kind()) {
      case K::True:
        return B3::T;
      case K::False:
        return B3::F;
      case K::Eq:
        return cmp(f.lhs(), f.rhs());
      case K::Not: {
        B3 r = eval(f.body());
        return r == B3::D ? r : r == B3::T ? B3::F : B3::T;
      }
      case K::And: {
        B3 acc = B3::T;
        for (const auto& k : f.kids()) {
          B3 r = eval(k);
          if (r == B3::F) return r;
          if (r == B3::D) acc = B3::D;
        }
        return acc;
      }
      case K::Or: {
        B3 acc = B3::F;
        for (const auto& k : f.kids()) {
          B3 r = eval(k);
          if (r == B3::T) return r;
          if (r == B3::D) acc = B3::D;
        }
        return acc;
      }
      case K::Exists:
        return eval(f.body());
    }
    return B3::D;
  }

  bool dfs(std::size_t i) {
    B3 r = eval(f_);
    if (r == B3::F) return false;
    if (i == names_.size()) return r == B3::T;
    set_[i] = 1;
    for (std::size_t len = 0; len <= max_len_; ++len) {
      std::vector<std::size_t> digits(len, 0);
      while (true) {
        val_[i].resize(len);
        for (std::size_t j = 0; j < len; ++j) val_[i][j] = sigma_[digits[j]];
        if (dfs(i + 1)) return true;
        std::size_t j = len;
        while (j > 0 && ++digits[j - 1] == sigma_.size()) digits[--j] = 0;
        if (j == 0) break;
      }
      if (sigma_.empty()) break;
    }
    set_[i] = 0;
    val_[i].clear();
    return false;
  }
};

}  // namespace

SolverVerdict brute_force_solve(const WordFormula& f, std::size_t max_len, const Alphabet& sigma) {
  return Brute(f, max_len, sigma).run();
}

}  // namespace seqsl
