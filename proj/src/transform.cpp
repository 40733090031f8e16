#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "seqsl/wordeq.hpp"

namespace seqsl {

namespace {

using Sym = std::int32_t;
using Term = std::vector<Sym>;

constexpr std::size_t kMaxFlat = std::size_t{1} << 26;
constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
constexpr std::uint64_t kBase = 0x1f3a5c7e9b2d4f61ULL % kMod;

bool is_var(Sym s) { return s < 0; }

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kMod), hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t r = lo + hi;
  return r >= kMod ? r - kMod : r;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, b = mulmod(b, b))
    if (e & 1) r = mulmod(r, b);
  return r;
}

// Terms are nodes of a shared concatenation DAG; node 0 is the empty word.
struct Dag {
  struct Node {
    Sym sym = 0;
    std::int32_t a = -1, b = -1;  // a < 0: leaf holding sym
    std::uint64_t len = 0;
  };
  std::vector<Node> nodes{Node{}};
  std::vector<std::uint64_t> hash{0};  // valid for ground nodes

  int leaf(Sym s) {
    nodes.push_back({s, -1, -1, 1});
    hash.push_back(is_var(s) ? 0 : static_cast<std::uint64_t>(s) + 1);
    return static_cast<int>(nodes.size()) - 1;
  }

  int cat(int x, int y) {
    if (nodes[x].len == 0) return y;
    if (nodes[y].len == 0) return x;
    nodes.push_back({0, x, y, nodes[x].len + nodes[y].len});
    std::uint64_t h = mulmod(hash[x], powmod(kBase, nodes[y].len)) + hash[y];
    hash.push_back(h >= kMod ? h - kMod : h);
    return static_cast<int>(nodes.size()) - 1;
  }

  int cat(std::initializer_list<int> parts) {
    int r = 0;
    for (int p : parts) r = cat(r, p);
    return r;
  }

  int from(const Term& t) {
    int r = 0;
    for (Sym s : t) r = cat(r, leaf(s));
    return r;
  }

  std::uint64_t len(int x) const { return nodes[x].len; }

  Term flat(int x) const {
    if (len(x) > kMaxFlat) throw std::length_error("transformed equation too large");
    Term out;
    out.reserve(len(x));
    std::vector<int> stack{x};
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      const Node& nd = nodes[n];
      if (nd.len == 0) continue;
      if (nd.a < 0) {
        out.push_back(nd.sym);
      } else {
        stack.push_back(nd.b);
        stack.push_back(nd.a);
      }
    }
    return out;
  }

  bool same(int x, int y) const { return len(x) == len(y) && hash[x] == hash[y]; }
};

struct IF {
  enum Kind { Eq, And, Or } kind = Eq;
  Term l, r;
  std::vector<IF> kids;
};

class Builder {
 public:
  Builder(const WordFormula& f, const Alphabet& sigma, const Substitution* s) : lift_(s != nullptr) {
    if (sigma.size() < 2) throw std::invalid_argument("alphabet needs at least two letters");
    for (Value v : sigma) add_letter(v);
    for (Value v : letters_of(f)) add_letter(v);
    for (const auto& n : word_vars(f)) var(n);
    if (s) {
      for (const auto& [name, w] : *s) {
        auto it = var_ix_.find(name);
        if (it == var_ix_.end()) continue;
        Term t;
        for (Value v : w) t.push_back(add_letter(v));
        vals_[static_cast<std::size_t>(it->second)] = dag_.from(t);
      }
    }
    WordFormula body = f;
    while (body.kind() == WordFormula::Kind::Exists) {
      prefix_.push_back(body.var());
      body = body.body();
    }
    IF g = to_if(body, false);
    auto [l, r] = T(g);
    l_ = l;
    r_ = r;
  }

  SingleEquation equation() const {
    SingleEquation e;
    e.prefix = prefix_;
    e.lhs = out(dag_.flat(l_));
    e.rhs = out(dag_.flat(r_));
    return e;
  }

  std::pair<std::uint64_t, std::uint64_t> size() const { return {dag_.len(l_), dag_.len(r_)}; }

  bool holds() { return dag_.same(eval(l_), eval(r_)); }

  Substitution values() const {
    Substitution s;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      Word w;
      for (Sym x : dag_.flat(vals_[i])) w.push_back(letters_[static_cast<std::size_t>(x)]);
      s[names_[i]] = std::move(w);
    }
    return s;
  }

 private:
  bool lift_;
  Dag dag_;
  std::vector<Value> letters_;
  std::map<Value, Sym> letter_ix_;
  std::vector<std::string> names_;
  std::map<std::string, int> var_ix_;
  std::vector<int> vals_;  // ground nodes
  std::vector<std::string> prefix_;
  int fresh_count_ = 0;
  int l_ = 0, r_ = 0;
  std::vector<int> memo_;

  Sym add_letter(Value v) {
    auto [it, ins] = letter_ix_.emplace(v, static_cast<Sym>(letters_.size()));
    if (ins) letters_.push_back(v);
    return it->second;
  }

  Sym var(const std::string& n) {
    auto [it, ins] = var_ix_.emplace(n, static_cast<int>(names_.size()));
    if (ins) {
      names_.push_back(n);
      vals_.push_back(0);
    }
    return -it->second - 1;
  }

  Sym fresh_var() {
    std::string n;
    do n = "b" + std::to_string(++fresh_count_);
    while (var_ix_.count(n));
    prefix_.push_back(n);
    return var(n);
  }

  void set(Sym v, int node) { vals_[static_cast<std::size_t>(-v - 1)] = node; }

  // Ground image of a node under the current values; memoized per call.
  int eval(int x) {
    memo_.assign(dag_.nodes.size(), -1);
    return eval_rec(x);
  }

  int eval_rec(int x) {
    if (memo_[static_cast<std::size_t>(x)] >= 0) return memo_[static_cast<std::size_t>(x)];
    const Dag::Node nd = dag_.nodes[static_cast<std::size_t>(x)];
    int r;
    if (nd.len == 0)
      r = 0;
    else if (nd.a < 0)
      r = is_var(nd.sym) ? vals_[static_cast<std::size_t>(-nd.sym - 1)] : x;
    else
      r = dag_.cat(eval_rec(nd.a), eval_rec(nd.b));
    if (memo_.size() < dag_.nodes.size()) memo_.resize(dag_.nodes.size(), -1);
    memo_[static_cast<std::size_t>(x)] = r;
    return r;
  }

  Term eval_flat(const Term& t) {
    Term o;
    for (Sym x : t) {
      if (is_var(x)) {
        Term w = dag_.flat(vals_[static_cast<std::size_t>(-x - 1)]);
        o.insert(o.end(), w.begin(), w.end());
      } else {
        o.push_back(x);
      }
    }
    return o;
  }

  Term conv(const WordTerm& t) {
    Term o;
    for (const auto& s : t) o.push_back(s.is_var ? var(s.var) : add_letter(s.letter));
    return o;
  }

  WordTerm out(const Term& t) const {
    WordTerm o;
    o.reserve(t.size());
    for (Sym x : t)
      o.push_back(is_var(x) ? WSym::of_var(names_[static_cast<std::size_t>(-x - 1)])
                            : WSym::let(letters_[static_cast<std::size_t>(x)]));
    return o;
  }

  static IF eq(Term l, Term r) {
    IF g;
    g.l = std::move(l);
    g.r = std::move(r);
    return g;
  }

  static IF junction(IF::Kind k, std::vector<IF> kids) {
    while (kids.size() > 1) {
      std::vector<IF> next;
      for (std::size_t i = 0; i + 1 < kids.size(); i += 2) {
        IF g;
        g.kind = k;
        g.kids.push_back(std::move(kids[i]));
        g.kids.push_back(std::move(kids[i + 1]));
        next.push_back(std::move(g));
      }
      if (kids.size() % 2) next.push_back(std::move(kids.back()));
      kids = std::move(next);
    }
    return std::move(kids[0]);
  }

  IF to_if(const WordFormula& f, bool neg) {
    using K = WordFormula::Kind;
    switch (f.kind()) {
      case K::True:
      case K::False:
        if ((f.kind() == K::True) != neg) return eq({}, {});
        return eq({0}, {1});
      case K::Eq:
        if (!neg) return eq(conv(f.lhs()), conv(f.rhs()));
        return negate(conv(f.lhs()), conv(f.rhs()));
      case K::Not:
        return to_if(f.body(), !neg);
      case K::And:
      case K::Or: {
        bool conj = (f.kind() == K::And) != neg;
        if (f.kids().empty()) return conj ? eq({}, {}) : eq({0}, {1});
        std::vector<IF> kids;
        for (const auto& k : f.kids()) kids.push_back(to_if(k, neg));
        return junction(conj ? IF::And : IF::Or, std::move(kids));
      }
      case K::Exists:
        throw std::invalid_argument("transform needs a quantifier-free body");
    }
    throw std::logic_error("bad formula");
  }

  // t1 != t2: one side extends the other by a letter, or they first differ
  // at a position holding distinct letters.
  IF negate(const Term& t1, const Term& t2) {
    Sym b = fresh_var(), b1 = fresh_var(), b2 = fresh_var();
    const Sym k = static_cast<Sym>(letters_.size());
    if (lift_) {
      Term w1 = eval_flat(t1), w2 = eval_flat(t2);
      std::size_t i = 0;
      while (i < w1.size() && i < w2.size() && w1[i] == w2[i]) ++i;
      auto part = [&](const Term& w, std::size_t from, std::size_t to) {
        return dag_.from(Term(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(to)));
      };
      if (w1 != w2) {
        if (i == w2.size()) {
          set(b, part(w1, i + 1, w1.size()));
        } else if (i == w1.size()) {
          set(b, part(w2, i + 1, w2.size()));
        } else {
          set(b, part(w1, 0, i));
          set(b1, part(w1, i + 1, w1.size()));
          set(b2, part(w2, i + 1, w2.size()));
        }
      }
    }
    auto with = [](Term t, std::initializer_list<Sym> tail) {
      t.insert(t.end(), tail);
      return t;
    };
    std::vector<IF> alts;
    for (Sym n = 0; n < k; ++n) alts.push_back(eq(t1, with(t2, {n, b})));
    for (Sym n = 0; n < k; ++n) alts.push_back(eq(t2, with(t1, {n, b})));
    for (Sym n = 0; n < k; ++n)
      for (Sym m = 0; m < k; ++m) {
        if (n == m) continue;
        IF g;
        g.kind = IF::And;
        g.kids.push_back(eq(t1, {b, n, b1}));
        g.kids.push_back(eq(t2, {b, m, b2}));
        alts.push_back(std::move(g));
      }
    return junction(IF::Or, std::move(alts));
  }

  int n0() { return dag_.leaf(0); }
  int n1() { return dag_.leaf(1); }

  // F(t1,t2) = t1 n t2 t1 n' t2
  int F(int a, int b) { return dag_.cat({a, n0(), b, a, n1(), b}); }

  std::pair<int, int> T(const IF& g) {
    if (g.kind == IF::Eq) return {dag_.from(g.l), dag_.from(g.r)};
    auto [t1, t2] = T(g.kids[0]);
    auto [s1, s2] = T(g.kids[1]);
    if (g.kind == IF::And) return {F(t1, s1), F(t2, s2)};
    return T0(dag_.cat(t1, s2), dag_.cat(t2, s1), dag_.cat(t2, s2));
  }

  // u == v or u' == v becomes X == b Y b' with X = P u P u' P, Y = P v P,
  // P = G(uu')^2 and G(t) = t n t n'.
  std::pair<int, int> T0(int u, int u2, int v) {
    int uu = dag_.cat(u, u2);
    int G = dag_.cat({uu, n0(), uu, n1()});
    int P = dag_.cat(G, G);
    int X = dag_.cat({P, u, P, u2, P});
    int Y = dag_.cat({P, v, P});
    Sym b = fresh_var(), b1 = fresh_var();
    if (lift_) {
      int ev = eval(v);
      if (dag_.same(eval(u), ev))
        set(b1, eval(dag_.cat(u2, P)));
      else if (dag_.same(eval(u2), ev))
        set(b, eval(dag_.cat(P, u)));
    }
    return {X, dag_.cat({dag_.leaf(b), Y, dag_.leaf(b1)})};
  }
};

}  // namespace

SingleEquation to_single_equation(const WordFormula& f, const Alphabet& sigma) {
  return Builder(f, sigma, nullptr).equation();
}

std::pair<std::uint64_t, std::uint64_t> single_equation_size(const WordFormula& f, const Alphabet& sigma) {
  return Builder(f, sigma, nullptr).size();
}

std::optional<Substitution> lift_solution(const WordFormula& f, const Alphabet& sigma, const Substitution& s) {
  if (!verify_substitution(f, s)) return std::nullopt;
  Builder b(f, sigma, &s);
  if (!b.holds()) return std::nullopt;
  return b.values();
}

bool lifted_solution_holds(const WordFormula& f, const Alphabet& sigma, const Substitution& s) {
  if (!verify_substitution(f, s)) return false;
  Builder b(f, sigma, &s);
  return b.holds();
}

WordFormula as_formula(const SingleEquation& e) {
  WordFormula f = WordFormula::eq(e.lhs, e.rhs);
  for (auto it = e.prefix.rbegin(); it != e.prefix.rend(); ++it) f = WordFormula::exists(*it, f);
  return f;
}

std::string to_string(const SingleEquation& e) {
  std::string s;
  if (!e.prefix.empty()) {
    s = "exists";
    for (const auto& v : e.prefix) s += " @" + v;
    s += ". ";
  }
  return s + to_string(e.lhs) + " == " + to_string(e.rhs);
}

}  // namespace seqsl
