#include "seqsl/decider.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "seqsl/analysis.hpp"
#include "seqsl/errors.hpp"
#include "seqsl/semantics.hpp"

namespace seqsl {

namespace {

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded() : std::runtime_error("reduction node budget exhausted") {}
};

Value eval_ind(const Stack& s, const IndTerm& t) {
  if (!t.is_var()) return t.value();
  auto it = s.find(t.name);
  if (it == s.end()) throw UnboundVariable(t.name);
  return it->second;
}

WordTerm to_word_term(const Stack& s, const SeqTerm& t) {
  WordTerm out;
  for (const auto& leaf : t.leaves()) {
    if (leaf.is_var)
      out.push_back(WSym::of_var(leaf.name));
    else
      out.push_back(WSym::let(eval_ind(s, leaf.ind)));
  }
  return out;
}

WordTerm to_word_term(const Word& w) {
  WordTerm out;
  for (Value v : w) out.push_back(WSym::let(v));
  return out;
}

void collect_constants(const Formula& f, std::set<Value>& out) {
  auto ind = [&](const IndTerm& t) {
    if (!t.is_var()) out.insert(t.value());
  };
  auto seq = [&](const SeqTerm& t) {
    for (const auto& l : t.leaves())
      if (!l.is_var) ind(l.ind);
  };
  switch (f.op()) {
    case Op::IndEq:
      ind(f.lhs_ind());
      ind(f.rhs_ind());
      return;
    case Op::SeqEq:
      seq(f.lhs_seq());
      seq(f.rhs_seq());
      return;
    case Op::PointsTo:
      ind(f.loc());
      seq(f.content());
      return;
    case Op::Not:
    case Op::ExistsProg:
    case Op::ExistsSeq:
      collect_constants(f.a(), out);
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::SepConj:
    case Op::Wand:
      collect_constants(f.a(), out);
      collect_constants(f.b(), out);
      return;
    default:
      return;
  }
}

// Cells hold indices into the interned term table.
using Cells = std::vector<std::pair<std::uint64_t, int>>;

std::vector<std::pair<Cells, Cells>> splits(const Cells& h) {
  std::vector<std::pair<Cells, Cells>> out;
  const std::uint64_t n = std::uint64_t{1} << h.size();
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    Cells a, b;
    for (std::size_t i = 0; i < h.size(); ++i) ((mask >> i) & 1 ? a : b).push_back(h[i]);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

class Reducer {
 public:
  Reducer(const Stack& s, const Formula& top, const DecideConfig& cfg) : s_(s), cfg_(cfg) {
    for (const auto& x : free_prog_vars(top)) {
      Value v = eval_ind(s, IndTerm::var(x));
      if (v.is_nat()) named_.push_back(v.nat_value());
    }
    std::sort(named_.begin(), named_.end());
    named_.erase(std::unique(named_.begin(), named_.end()), named_.end());
    beta_ = beta_bar_name(top);
    for (const auto& t : seq_terms(top)) {
      int id = intern(to_word_term(s, t));
      if (std::find(phi_terms_.begin(), phi_terms_.end(), id) == phi_terms_.end()) phi_terms_.push_back(id);
    }
    range_.push_back(intern({}));
    for (int id : phi_terms_)
      if (id != range_[0]) range_.push_back(id);
    range_.push_back(intern({WSym::of_var(beta_)}));
  }

  int intern(const WordTerm& t) {
    auto [it, ins] = term_ix_.emplace(t, static_cast<int>(terms_.size()));
    if (ins) terms_.push_back(t);
    return it->second;
  }

  const WordTerm& term(int id) const { return terms_[static_cast<std::size_t>(id)]; }

  WordFormula side() const {
    std::vector<WordFormula> kids;
    for (int id : phi_terms_) kids.push_back(wf::ne({WSym::of_var(beta_)}, term(id)));
    return wf::and_(std::move(kids));
  }

  const std::vector<int>& range() const { return range_; }

  // D without dom(h): the named locations plus the first m unused naturals.
  std::vector<std::uint64_t> fresh_domain(const Cells& h, std::size_t m) const {
    std::vector<std::uint64_t> out;
    auto in_h = [&](std::uint64_t l) {
      return std::any_of(h.begin(), h.end(), [&](const auto& c) { return c.first == l; });
    };
    for (std::uint64_t l : named_)
      if (!in_h(l)) out.push_back(l);
    for (std::uint64_t l = 1; m > 0; ++l) {
      if (in_h(l) || std::binary_search(named_.begin(), named_.end(), l)) continue;
      out.push_back(l);
      --m;
    }
    return out;
  }

  // All heaps over dom with contents from the range, fewest cells first.
  std::vector<Cells> extensions(const std::vector<std::uint64_t>& dom) {
    const std::size_t k = range_.size() + 1;
    std::vector<Cells> out;
    std::vector<std::size_t> pick(dom.size(), 0);
    while (true) {
      tick();
      Cells c;
      for (std::size_t i = 0; i < dom.size(); ++i)
        if (pick[i]) c.emplace_back(dom[i], range_[pick[i] - 1]);
      std::sort(c.begin(), c.end());
      out.push_back(std::move(c));
      std::size_t j = 0;
      while (j < pick.size() && ++pick[j] == k) pick[j++] = 0;
      if (j == pick.size()) break;
    }
    std::stable_sort(out.begin(), out.end(), [](const Cells& a, const Cells& b) { return a.size() < b.size(); });
    return out;
  }

  WordFormula T(const Formula& f, const Cells& h) {
    tick();
    auto key = std::make_pair(static_cast<const void*>(f.ptr()), h);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    WordFormula r = compute(f, h);
    memo_.emplace(std::move(key), r);
    return r;
  }

  std::size_t sz(const Formula& f) {
    auto [it, ins] = size_.emplace(f.ptr(), 0);
    if (ins) it->second = formula_size(f);
    return it->second;
  }

 private:
  const Stack& s_;
  const DecideConfig& cfg_;
  std::vector<std::uint64_t> named_;
  std::string beta_;
  std::vector<WordTerm> terms_;
  std::map<WordTerm, int> term_ix_;
  std::vector<int> phi_terms_, range_;
  std::map<std::pair<const void*, Cells>, WordFormula> memo_;
  std::map<const void*, std::size_t> size_;
  std::size_t work_ = 0;

  void tick() {
    if (++work_ > cfg_.max_nodes) throw BudgetExceeded();
  }

  WordFormula compute(const Formula& f, const Cells& h) {
    switch (f.op()) {
      case Op::True:
        return WordFormula::true_();
      case Op::False:
        return WordFormula::false_();
      case Op::IndEq:
        return eval_ind(s_, f.lhs_ind()) == eval_ind(s_, f.rhs_ind()) ? WordFormula::true_() : WordFormula::false_();
      case Op::SeqEq:
        return wf::eq(to_word_term(s_, f.lhs_seq()), to_word_term(s_, f.rhs_seq()));
      case Op::Emp:
        return h.empty() ? WordFormula::true_() : WordFormula::false_();
      case Op::PointsTo: {
        Value loc = eval_ind(s_, f.loc());
        if (h.size() != 1 || !loc.is_nat() || h[0].first != loc.nat_value()) return WordFormula::false_();
        return wf::eq(term(h[0].second), to_word_term(s_, f.content()));
      }
      case Op::Not:
        return wf::not_(T(f.a(), h));
      case Op::And:
        return wf::and_({T(f.a(), h), T(f.b(), h)});
      case Op::Or:
        return wf::or_({T(f.a(), h), T(f.b(), h)});
      case Op::Implies:
        return wf::or_({wf::not_(T(f.a(), h)), T(f.b(), h)});
      case Op::SepConj: {
        std::vector<WordFormula> alts;
        for (const auto& [h1, h2] : splits(h)) {
          WordFormula l = T(f.a(), h1);
          if (l.kind() == WordFormula::Kind::False) continue;
          WordFormula both = wf::and_({l, T(f.b(), h2)});
          if (both.kind() == WordFormula::Kind::True) return both;
          alts.push_back(std::move(both));
        }
        return wf::or_(std::move(alts));
      }
      case Op::Wand: {
        auto dom = fresh_domain(h, std::max(sz(f.a()), sz(f.b())));
        std::vector<WordFormula> conj;
        for (const Cells& ext : extensions(dom)) {
          WordFormula l = T(f.a(), ext);
          if (l.kind() == WordFormula::Kind::False) continue;
          Cells both = h;
          both.insert(both.end(), ext.begin(), ext.end());
          std::sort(both.begin(), both.end());
          WordFormula c = wf::or_({wf::not_(l), T(f.b(), both)});
          if (c.kind() == WordFormula::Kind::False) return c;
          conj.push_back(std::move(c));
        }
        return wf::and_(std::move(conj));
      }
      default:
        throw FragmentError("reduction needs a quantifier-free propositional formula");
    }
  }
};

Cells ground_cells(Reducer& r, const GroundHeap& h) {
  Cells c;
  for (const auto& [l, w] : h) c.emplace_back(l, r.intern(to_word_term(w)));
  return c;
}

Formula prepare(const Formula& phi) {
  Formula d = desugar(phi);
  require_pseqsl(d, true);
  if (!is_quantifier_free(d)) throw FragmentError("reduction needs a quantifier-free formula");
  return d;
}

SeqAssignment seq_part(const Formula& phi, const Substitution& w) {
  SeqAssignment out;
  for (const auto& a : free_seq_vars(phi)) {
    auto it = w.find(a);
    out[a] = it == w.end() ? Word{} : it->second;
  }
  return out;
}

Substitution complete(const WordFormula& f, Substitution w) {
  for (const auto& v : word_vars(f)) w.try_emplace(v);
  return w;
}

SatVerdict checked(const Formula& phi, Model m) {
  SatVerdict v;
  Verdict3 c = check(m, phi);
  if (c.truth == Truth::True) {
    v.status = SatStatus::Sat;
    v.witness = std::move(m);
  } else {
    v.status = SatStatus::Unknown;
    v.reason = "witness did not check: " + truth_name(c.truth) + (c.reason.empty() ? "" : " (" + c.reason + ")");
  }
  return v;
}

SatStatus from(WeStatus s) {
  return s == WeStatus::Sat ? SatStatus::Sat : s == WeStatus::Unsat ? SatStatus::Unsat : SatStatus::Unknown;
}

}  // namespace

std::string sat_status_name(SatStatus s) {
  switch (s) {
    case SatStatus::Sat:
      return "sat";
    case SatStatus::Unsat:
      return "unsat";
    case SatStatus::Unknown:
      return "unknown";
  }
  return "?";
}

std::string validity_name(Validity v) {
  switch (v) {
    case Validity::Valid:
      return "valid";
    case Validity::Invalid:
      return "invalid";
    case Validity::Unknown:
      return "unknown";
  }
  return "?";
}

std::string beta_bar_name(const Formula& phi) {
  std::set<std::string> used = all_names(phi);
  std::string n = "bbar";
  for (int i = 1; used.count(n); ++i) n = "bbar" + std::to_string(i);
  return n;
}

WordFormula reduce(const Stack& s, const SymbolicHeap& h, const Formula& phi, const DecideConfig& cfg) {
  Formula d = prepare(phi);
  Reducer r(s, d, cfg);
  Cells c;
  for (const auto& [l, t] : h) c.emplace_back(l, r.intern(to_word_term(s, t)));
  return wf::and_({r.T(d, c), r.side()});
}

Alphabet reduction_alphabet(const Stack& s, const GroundHeap& h, const WordFormula& reduced) {
  std::set<Value> letters;
  for (const auto& [x, v] : s) letters.insert(v);
  for (const auto& [l, w] : h) {
    letters.insert(Value::nat(l));
    letters.insert(w.begin(), w.end());
  }
  for (Value v : letters_of(reduced)) letters.insert(v);
  std::uint64_t next = 1;
  for (Value v : letters)
    if (v.is_nat()) next = std::max(next, v.nat_value() + 1);
  std::size_t k = std::max<std::size_t>(word_vars(reduced).size(), 1);
  for (std::size_t i = 0; i < k; ++i) letters.insert(Value::nat(next + i));
  return Alphabet(letters.begin(), letters.end());
}

SatVerdict decide_given_stack_heap(const Stack& s, const GroundHeap& h, const Formula& phi, const DecideConfig& cfg) {
  Formula d = prepare(phi);
  SatVerdict v;
  WordFormula f;
  try {
    Reducer r(s, d, cfg);
    f = wf::and_({r.T(d, ground_cells(r, h)), r.side()});
  } catch (const BudgetExceeded& e) {
    v.reason = e.what();
    return v;
  }
  SolveConfig sc = cfg.solve;
  sc.alphabet = reduction_alphabet(s, h, f);
  SolverVerdict sv = solve(f, sc);
  if (sv.status != WeStatus::Sat) {
    v.status = from(sv.status);
    v.reason = sv.reason;
    return v;
  }
  return checked(d, Model{s, seq_part(d, sv.witness), h});
}

SatVerdict decide_given_stack(const Stack& s, const Formula& phi, const DecideConfig& cfg) {
  Formula d = prepare(phi);
  SatVerdict v;
  bool unknown = false;
  try {
    Reducer r(s, d, cfg);
    const WordFormula side = r.side();
    auto dom = r.fresh_domain({}, std::max(r.sz(d), formula_size(mk::false_())));
    for (const Cells& ext : r.extensions(dom)) {
      WordFormula f = wf::and_({r.T(d, ext), side});
      if (f.kind() == WordFormula::Kind::False) continue;
      GroundHeap empty;
      SolveConfig sc = cfg.solve;
      sc.alphabet = reduction_alphabet(s, empty, f);
      SolverVerdict sv = solve(f, sc);
      if (sv.status == WeStatus::Unknown) {
        unknown = true;
        if (v.reason.empty()) v.reason = sv.reason;
      }
      if (sv.status != WeStatus::Sat) continue;
      Substitution w = complete(f, sv.witness);
      w.try_emplace(beta_bar_name(d));
      GroundHeap heap;
      for (const auto& [l, id] : ext) heap[l] = seqsl::apply(r.term(id), w);
      SatVerdict c = checked(d, Model{s, seq_part(d, w), heap});
      if (c.status == SatStatus::Sat) return c;
      unknown = true;
      v.reason = c.reason;
    }
  } catch (const BudgetExceeded& e) {
    v.status = SatStatus::Unknown;
    v.reason = e.what();
    return v;
  }
  v.status = unknown ? SatStatus::Unknown : SatStatus::Unsat;
  return v;
}

SatVerdict decide_sat(const Formula& phi, const DecideConfig& cfg, const std::set<std::string>& nat_only) {
  Formula d = desugar(phi);
  const std::set<std::string>& nats = nat_only;
  if (!is_quantifier_free(d)) throw FragmentError("satisfiability is decided for quantifier-free formulas only");
  require_pseqsl(d, true);
  std::set<Value> consts;
  collect_constants(d, consts);
  std::vector<std::string> vars;
  for (const auto& x : free_prog_vars(d)) vars.push_back(x);
  std::vector<Value> locs;
  for (Value c : consts)
    if (c.is_nat()) locs.push_back(c);
  for (std::uint64_t l = 1, n = 0; n < vars.size(); ++l)
    if (!consts.count(Value::nat(l))) {
      locs.push_back(Value::nat(l));
      ++n;
    }
  std::sort(locs.begin(), locs.end());
  std::vector<Value> all = locs;
  all.push_back(Value::nil());
  all.push_back(Value::hash());

  SatVerdict out;
  out.status = SatStatus::Unsat;
  std::vector<std::size_t> pick(vars.size(), 0);
  while (true) {
    Stack s;
    bool ok = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto& range = nats.count(vars[i]) ? locs : all;
      if (pick[i] >= range.size()) ok = false;
      else s[vars[i]] = range[pick[i]];
    }
    if (ok) {
      SatVerdict v = decide_given_stack(s, d, cfg);
      if (v.status == SatStatus::Sat) return v;
      if (v.status == SatStatus::Unknown && out.status != SatStatus::Unknown) {
        out.status = SatStatus::Unknown;
        out.reason = v.reason;
      }
    }
    std::size_t j = 0;
    while (j < pick.size() && ++pick[j] == all.size()) pick[j++] = 0;
    if (j == pick.size()) break;
  }
  return out;
}

ValidityVerdict decide_pi1_validity(const Formula& phi, const DecideConfig& cfg) {
  Formula d = desugar(phi);
  Prenex p = prenex(d);
  std::set<std::string> bound;
  for (const auto& b : p.prefix) {
    if (!b.universal) throw FragmentError("validity needs a universal prefix");
    if (!b.seq) bound.insert(b.name);
  }
  require_pseqsl(p.matrix, true);
  ValidityVerdict out;
  SatVerdict v = decide_sat(mk::not_(p.matrix), cfg, bound);
  switch (v.status) {
    case SatStatus::Sat:
      out.status = Validity::Invalid;
      out.countermodel = v.witness;
      break;
    case SatStatus::Unsat:
      out.status = Validity::Valid;
      break;
    case SatStatus::Unknown:
      out.status = Validity::Unknown;
      out.reason = v.reason;
      break;
  }
  return out;
}

}  // namespace seqsl
