#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "seqsl/wordeq.hpp"

namespace seqsl {

namespace {

// Letters are indices >= 0, variable i is encoded as -(i + 1).
using Sym = std::int32_t;
using Term = std::vector<Sym>;

struct Eqn {
  Term l, r;
};

struct State {
  std::vector<Eqn> eqs;
  std::vector<Eqn> dis;
};

struct Assign {
  int var;
  Term rhs;  // occurrences of var in rhs denote its new value
};

enum class St { Sat, Unsat, Unknown };

bool is_var(Sym s) { return s < 0; }
int var_of(Sym s) { return -s - 1; }
Sym var_sym(int v) { return -v - 1; }

struct NF {
  enum Kind { Lit, And, Or, True, False } kind = True;
  int lit = 0;
  std::vector<int> kids;
};

class Solver {
 public:
  Solver(const WordFormula& f, const SolveConfig& cfg) : f_(f), cfg_(cfg) {
    std::set<Value> sig;
    for (Value v : letters_of(f)) sig.insert(v);
    if (cfg.alphabet) {
      sig.insert(cfg.alphabet->begin(), cfg.alphabet->end());
    } else {
      std::uint64_t m = 0;
      for (Value v : sig)
        if (v.is_nat()) m = std::max(m, v.nat_value() + 1);
      sig.insert(Value::nat(m));
    }
    for (Value v : sig) {
      letter_ix_[v] = static_cast<int>(letters_.size());
      letters_.push_back(v);
    }
    for (const auto& name : word_vars(f)) {
      var_ix_[name] = static_cast<int>(vars_.size());
      vars_.push_back(name);
    }
    root_ = build(f, false);
  }

  SolverVerdict run() {
    SolverVerdict out;
    St r = dpll({root_}, {});
    if (r == St::Sat) {
      out.status = WeStatus::Sat;
      out.witness = witness_;
      return out;
    }
    out.status = r == St::Unsat ? WeStatus::Unsat : WeStatus::Unknown;
    if (r == St::Unknown) out.reason = reason_.empty() ? "search bound reached" : reason_;
    return out;
  }

 private:
  const WordFormula& f_;
  const SolveConfig& cfg_;
  std::vector<Value> letters_;
  std::map<Value, int> letter_ix_;
  std::vector<std::string> vars_;
  std::map<std::string, int> var_ix_;
  std::vector<NF> nf_;
  std::vector<Eqn> lit_eq_;  // literal 2i is eq i, 2i+1 its negation
  std::map<std::pair<Term, Term>, int> eq_ix_;
  int root_ = 0;
  std::size_t nodes_ = 0;
  std::string reason_;
  Substitution witness_;
  std::set<std::vector<int>> leaves_;

  Term conv(const WordTerm& t) {
    Term out;
    out.reserve(t.size());
    for (const auto& x : t) out.push_back(x.is_var ? var_sym(var_ix_.at(x.var)) : letter_ix_.at(x.letter));
    return out;
  }

  int add(NF n) {
    nf_.push_back(std::move(n));
    return static_cast<int>(nf_.size()) - 1;
  }

  int build(const WordFormula& f, bool neg) {
    using K = WordFormula::Kind;
    switch (f.kind()) {
      case K::True:
      case K::False: {
        NF n;
        n.kind = (f.kind() == K::True) != neg ? NF::True : NF::False;
        return add(n);
      }
      case K::Eq: {
        std::pair<Term, Term> key{conv(f.lhs()), conv(f.rhs())};
        if (key.second < key.first) std::swap(key.first, key.second);
        auto it = eq_ix_.find(key);
        int e;
        if (it == eq_ix_.end()) {
          e = static_cast<int>(lit_eq_.size());
          eq_ix_[key] = e;
          lit_eq_.push_back({key.first, key.second});
        } else {
          e = it->second;
        }
        NF n;
        n.kind = NF::Lit;
        n.lit = 2 * e + (neg ? 1 : 0);
        return add(n);
      }
      case K::Not:
        return build(f.body(), !neg);
      case K::And:
      case K::Or: {
        NF n;
        n.kind = (f.kind() == K::And) != neg ? NF::And : NF::Or;
        for (const auto& k : f.kids()) n.kids.push_back(build(k, neg));
        return add(std::move(n));
      }
      case K::Exists:
        if (neg) throw std::invalid_argument("existential under negation");
        return build(f.body(), neg);
    }
    throw std::logic_error("bad formula");
  }

  bool budget() {
    if (++nodes_ > cfg_.max_nodes) {
      if (reason_.empty()) reason_ = "node budget " + std::to_string(cfg_.max_nodes) + " exhausted";
      return false;
    }
    return true;
  }

  // ---- Boolean layer ----

  static bool has(const std::vector<int>& lits, int l) { return std::binary_search(lits.begin(), lits.end(), l); }

  St dpll(std::vector<int> pending, std::vector<int> lits) {
    if (!budget()) return St::Unknown;
    std::vector<int> ors;
    while (!pending.empty()) {
      int i = pending.back();
      pending.pop_back();
      const NF& n = nf_[i];
      switch (n.kind) {
        case NF::True:
          break;
        case NF::False:
          return St::Unsat;
        case NF::And:
          pending.insert(pending.end(), n.kids.begin(), n.kids.end());
          break;
        case NF::Lit:
          if (has(lits, n.lit ^ 1)) return St::Unsat;
          if (!has(lits, n.lit)) lits.insert(std::upper_bound(lits.begin(), lits.end(), n.lit), n.lit);
          break;
        case NF::Or:
          ors.push_back(i);
          break;
      }
    }
    // Drop satisfied disjunctions; pick the one with the fewest live branches.
    std::vector<int> live_ors;
    int pick = -1;
    std::size_t best = SIZE_MAX;
    for (int o : ors) {
      bool sat = false;
      std::size_t live = 0;
      for (int k : nf_[o].kids) {
        const NF& c = nf_[k];
        if (c.kind == NF::Lit && has(lits, c.lit)) sat = true;
        if (c.kind == NF::True) sat = true;
        if (!(c.kind == NF::Lit && has(lits, c.lit ^ 1)) && c.kind != NF::False) ++live;
      }
      if (sat) continue;
      if (live == 0) return St::Unsat;
      live_ors.push_back(o);
      if (live < best) {
        best = live;
        pick = o;
      }
    }
    if (live_ors.empty()) {
      if (!leaves_.insert(lits).second) return St::Unsat;
      return theory(lits, true);
    }
    St t = theory(lits, false);
    if (t == St::Unsat || t == St::Sat) return t;
    bool unknown = false;
    for (int k : nf_[pick].kids) {
      const NF& c = nf_[k];
      if (c.kind == NF::False || (c.kind == NF::Lit && has(lits, c.lit ^ 1))) continue;
      std::vector<int> next;
      for (int o : live_ors)
        if (o != pick) next.push_back(o);
      next.push_back(k);
      St r = dpll(std::move(next), lits);
      if (r == St::Sat) return r;
      if (r == St::Unknown) unknown = true;
    }
    return unknown ? St::Unknown : St::Unsat;
  }

  // Solves the literal conjunction. An intermediate call returns Sat only
  // when its witness already satisfies the whole formula.
  St theory(const std::vector<int>& lits, bool leaf) {
    State s;
    for (int l : lits) (l & 1 ? s.dis : s.eqs).push_back(lit_eq_[static_cast<std::size_t>(l >> 1)]);
    Conj c(*this);
    St r = c.solve(std::move(s));
    if (r == St::Sat) {
      Substitution w = c.witness();
      if (verify_substitution(f_, w)) {
        witness_ = std::move(w);
        return St::Sat;
      }
      return leaf ? St::Unknown : St::Unknown;
    }
    return r;
  }

  // ---- Nielsen layer ----

  class Conj {
   public:
    explicit Conj(Solver& s) : S(s), val_(s.vars_.size()) {}

    St solve(State st) {
      std::size_t longest = 0;
      for (const auto& e : st.eqs) longest = std::max({longest, e.l.size(), e.r.size()});
      cap_ = longest + S.cfg_.max_len + 8;
      St r = search(std::move(st));
      if (r == St::Unsat && cut_) return St::Unknown;
      return r;
    }

    Substitution witness() const {
      Substitution out;
      for (std::size_t i = 0; i < S.vars_.size(); ++i) {
        Word w;
        for (Sym x : val_[i]) w.push_back(S.letters_[static_cast<std::size_t>(x)]);
        out[S.vars_[i]] = std::move(w);
      }
      return out;
    }

   private:
    Solver& S;
    std::vector<Assign> log_;
    std::unordered_set<std::string> seen_;
    std::vector<Term> val_;
    std::size_t cap_ = 0;
    std::size_t live_ = 0;  // symbols held by states on the search stack
    bool cut_ = false;

    static constexpr std::size_t kLiveCap = std::size_t{1} << 24;

    static std::size_t weight(const State& s) {
      std::size_t n = 0;
      for (const auto& e : s.eqs) n += e.l.size() + e.r.size();
      for (const auto& e : s.dis) n += e.l.size() + e.r.size();
      return n;
    }

    static void subst(Term& t, int v, const Term& rhs) {
      bool hit = false;
      for (Sym x : t)
        if (x == var_sym(v)) {
          hit = true;
          break;
        }
      if (!hit) return;
      Term out;
      out.reserve(t.size() + rhs.size());
      for (Sym x : t) {
        if (x == var_sym(v))
          out.insert(out.end(), rhs.begin(), rhs.end());
        else
          out.push_back(x);
      }
      t = std::move(out);
    }

    void apply(State& s, int v, const Term& rhs) {
      for (auto& e : s.eqs) {
        subst(e.l, v, rhs);
        subst(e.r, v, rhs);
      }
      for (auto& e : s.dis) {
        subst(e.l, v, rhs);
        subst(e.r, v, rhs);
      }
      log_.push_back({v, rhs});
    }

    static void strip(Eqn& e) {
      std::size_t p = 0;
      while (p < e.l.size() && p < e.r.size() && e.l[p] == e.r[p]) ++p;
      e.l.erase(e.l.begin(), e.l.begin() + static_cast<std::ptrdiff_t>(p));
      e.r.erase(e.r.begin(), e.r.begin() + static_cast<std::ptrdiff_t>(p));
      while (!e.l.empty() && !e.r.empty() && e.l.back() == e.r.back()) {
        e.l.pop_back();
        e.r.pop_back();
      }
    }

    static bool ground(const Term& t) { return std::none_of(t.begin(), t.end(), is_var); }

    static bool occurs(const Term& t, Sym v) { return std::find(t.begin(), t.end(), v) != t.end(); }

    // Letter and variable counts must balance when the variable counts agree.
    static bool parikh_ok(const Eqn& e) {
      std::map<Sym, long> c;
      for (Sym x : e.l) ++c[x];
      for (Sym x : e.r) --c[x];
      bool vars_equal = true;
      for (const auto& [s, n] : c)
        if (is_var(s) && n != 0) vars_equal = false;
      if (!vars_equal) {
        long len = 0;
        bool l_dom = true, r_dom = true;
        for (const auto& [s, n] : c) {
          if (!is_var(s)) len += n;
          if (is_var(s) && n < 0) l_dom = false;
          if (is_var(s) && n > 0) r_dom = false;
        }
        // With every variable count on the left at least the right's, the
        // left is at least len longer.
        if (l_dom && len > 0) return false;
        if (r_dom && len < 0) return false;
        return true;
      }
      for (const auto& [s, n] : c)
        if (n != 0) return false;
      return true;
    }

    // Simplifies to a fixpoint; false on a definite contradiction.
    bool normalize(State& s) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = 0; i < s.eqs.size(); ++i) {
          Eqn& e = s.eqs[i];
          strip(e);
          if (e.l.empty() && e.r.empty()) {
            s.eqs.erase(s.eqs.begin() + static_cast<std::ptrdiff_t>(i));
            changed = true;
            break;
          }
          if (e.l.empty() || e.r.empty()) {
            const Term t = e.l.empty() ? e.r : e.l;
            if (!std::all_of(t.begin(), t.end(), is_var)) return false;
            for (Sym x : t) apply(s, var_of(x), {});
            changed = true;
            break;
          }
          if (!is_var(e.l.front()) && !is_var(e.r.front())) return false;
          if (!is_var(e.l.back()) && !is_var(e.r.back())) return false;
          if (!parikh_ok(e)) return false;
          for (int side = 0; side < 2; ++side) {
            const Term& a = side ? e.r : e.l;
            const Term& b = side ? e.l : e.r;
            if (a.size() == 1 && is_var(a[0]) && !occurs(b, a[0])) {
              int v = var_of(a[0]);
              Term rhs = b;
              s.eqs.erase(s.eqs.begin() + static_cast<std::ptrdiff_t>(i));
              apply(s, v, rhs);
              changed = true;
              break;
            }
          }
          if (changed) break;
        }
      }
      for (std::size_t i = 0; i < s.dis.size();) {
        Eqn& e = s.dis[i];
        strip(e);
        if (e.l.empty() && e.r.empty()) return false;
        bool sure = (ground(e.l) && ground(e.r)) ||
                    (!e.l.empty() && !e.r.empty() &&
                     ((!is_var(e.l.front()) && !is_var(e.r.front())) || (!is_var(e.l.back()) && !is_var(e.r.back())))) ||
                    (e.l.empty() && !ground(e.r) && !std::all_of(e.r.begin(), e.r.end(), is_var)) ||
                    (e.r.empty() && !ground(e.l) && !std::all_of(e.l.begin(), e.l.end(), is_var)) ||
                    (e.l.empty() && ground(e.r)) || (e.r.empty() && ground(e.l));
        if (sure)
          s.dis.erase(s.dis.begin() + static_cast<std::ptrdiff_t>(i));
        else
          ++i;
      }
      return true;
    }

    static std::string key(const State& s) {
      std::string k;
      auto put = [&](const Term& t) {
        k.append(reinterpret_cast<const char*>(t.data()), t.size() * sizeof(Sym));
        Sym sep = INT32_MIN;
        k.append(reinterpret_cast<const char*>(&sep), sizeof sep);
      };
      for (const auto& e : s.eqs) {
        put(e.l);
        put(e.r);
      }
      k += '|';
      for (const auto& e : s.dis) {
        put(e.l);
        put(e.r);
      }
      return k;
    }

    St search(State s) {
      if (!S.budget()) {
        cut_ = true;
        return St::Unknown;
      }
      std::size_t mark = log_.size();
      auto undo = [&] { log_.resize(mark); };
      if (!normalize(s)) {
        undo();
        return St::Unsat;
      }
      if (s.eqs.empty()) {
        St r = leaf(s);
        if (r != St::Sat) undo();
        return r;
      }
      for (const auto& e : s.eqs)
        if (e.l.size() > cap_ || e.r.size() > cap_) {
          cut_ = true;
          if (S.reason_.empty()) S.reason_ = "equation length bound reached";
          undo();
          return St::Unknown;
        }
      if (weight(s) <= 4096 && !seen_.insert(key(s)).second) {
        undo();
        return St::Unsat;
      }
      // Branch on the shortest equation's heads.
      std::size_t pick = 0;
      for (std::size_t i = 1; i < s.eqs.size(); ++i)
        if (s.eqs[i].l.size() + s.eqs[i].r.size() < s.eqs[pick].l.size() + s.eqs[pick].r.size()) pick = i;
      Sym a = s.eqs[pick].l.front();
      Sym b = s.eqs[pick].r.front();
      std::vector<std::pair<int, Term>> branches;
      if (is_var(a) && is_var(b)) {
        branches.push_back({var_of(a), {b}});
        branches.push_back({var_of(a), {b, a}});
        branches.push_back({var_of(b), {a, b}});
      } else {
        Sym x = is_var(a) ? a : b;
        Sym c = is_var(a) ? b : a;
        branches.push_back({var_of(x), {}});
        branches.push_back({var_of(x), {c, x}});
      }
      const std::size_t w = weight(s);
      if (live_ + w > kLiveCap) {
        cut_ = true;
        if (S.reason_.empty()) S.reason_ = "search memory bound reached";
        undo();
        return St::Unknown;
      }
      live_ += w;
      bool unknown = false;
      for (auto& [v, rhs] : branches) {
        State t = s;
        std::size_t m2 = log_.size();
        apply(t, v, rhs);
        St r = search(std::move(t));
        if (r == St::Sat) {
          live_ -= w;
          return r;
        }
        log_.resize(m2);
        if (r == St::Unknown) unknown = true;
      }
      live_ -= w;
      undo();
      return unknown ? St::Unknown : St::Unsat;
    }

    bool dis_hold(const State& s, const std::vector<Term>& v) const {
      auto ev = [&](const Term& t) {
        Term out;
        for (Sym x : t) {
          if (is_var(x)) {
            const Term& w = v[static_cast<std::size_t>(var_of(x))];
            out.insert(out.end(), w.begin(), w.end());
          } else {
            out.push_back(x);
          }
        }
        return out;
      };
      for (const auto& e : s.dis)
        if (ev(e.l) == ev(e.r)) return false;
      return true;
    }

    void unwind(std::vector<Term> v) {
      for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
        Term out;
        for (Sym x : it->rhs) {
          if (is_var(x)) {
            const Term& w = v[static_cast<std::size_t>(var_of(x))];
            out.insert(out.end(), w.begin(), w.end());
          } else {
            out.push_back(x);
          }
        }
        v[static_cast<std::size_t>(it->var)] = std::move(out);
      }
      val_ = std::move(v);
    }

    // Only disequations are left; every remaining variable is free.
    St leaf(const State& s) {
      std::vector<Term> v(S.vars_.size());
      if (dis_hold(s, v)) {
        unwind(std::move(v));
        return St::Sat;
      }
      std::vector<int> free;
      for (const auto& e : s.dis)
        for (const Term* t : {&e.l, &e.r})
          for (Sym x : *t)
            if (is_var(x)) free.push_back(var_of(x));
      std::sort(free.begin(), free.end());
      free.erase(std::unique(free.begin(), free.end()), free.end());
      std::vector<Term> words;
      const int k = static_cast<int>(S.letters_.size());
      words.push_back({});
      for (int a = 0; a < k; ++a) words.push_back({a});
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) words.push_back({a, b});
      // Candidates by increasing total length, up to two letters per variable.
      std::size_t tries = 0;
      std::function<bool(std::size_t, std::size_t)> fill = [&](std::size_t i, std::size_t budget) -> bool {
        if (i == free.size()) {
          ++tries;
          return budget == 0 && dis_hold(s, v);
        }
        const std::size_t rest = 2 * (free.size() - i - 1);
        for (std::size_t len = budget > rest ? budget - rest : 0; len <= std::min<std::size_t>(2, budget); ++len)
          for (const Term& w : words) {
            if (w.size() != len) continue;
            v[static_cast<std::size_t>(free[i])] = w;
            if (fill(i + 1, budget - len)) return true;
            if (tries > 20000) return false;
          }
        v[static_cast<std::size_t>(free[i])].clear();
        return false;
      };
      for (std::size_t total = 0; total <= 2 * free.size() && tries <= 20000; ++total)
        if (fill(0, total)) {
          unwind(std::move(v));
          return St::Sat;
        }
      cut_ = true;
      if (S.reason_.empty()) S.reason_ = "disequations not satisfied by short candidates";
      return St::Unknown;
    }
  };
};

}  // namespace

SolverVerdict solve(const WordFormula& f, const SolveConfig& cfg) { return Solver(f, cfg).run(); }

}  // namespace seqsl
