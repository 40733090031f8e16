#include "seqsl/analysis.hpp"

#include <functional>

#include "seqsl/errors.hpp"
#include "seqsl/macros.hpp"

namespace seqsl {

namespace {

const Formula& expanded(const Formula& f, Formula& storage) {
  if (!has_macros(f)) return f;
  storage = expand_macros(f);
  return storage;
}

Formula desugar_rec(const Formula& f) {
  switch (f.op()) {
    case Op::Not:
      return mk::implies(desugar_rec(f.a()), mk::false_());
    case Op::And:
      return mk::implies(
          mk::implies(desugar_rec(f.a()), mk::implies(desugar_rec(f.b()), mk::false_())),
          mk::false_());
    case Op::Or:
      return mk::implies(mk::implies(desugar_rec(f.a()), mk::false_()), desugar_rec(f.b()));
    case Op::True:
      return mk::implies(mk::false_(), mk::false_());
    case Op::Implies:
      return mk::implies(desugar_rec(f.a()), desugar_rec(f.b()));
    case Op::SepConj:
      return mk::sep(desugar_rec(f.a()), desugar_rec(f.b()));
    case Op::Wand:
      return mk::wand(desugar_rec(f.a()), desugar_rec(f.b()));
    case Op::ExistsProg:
      return mk::exists_prog(f.var(), desugar_rec(f.body()));
    case Op::ExistsSeq:
      return mk::exists_seq(f.var(), desugar_rec(f.body()));
    case Op::Macro:
      throw MacroError("unexpanded macro " + f.macro_name());
    default:
      return f;
  }
}

std::size_t size_rec(const Formula& f) {
  switch (f.op()) {
    case Op::Emp:
    case Op::PointsTo:
      return 1;
    case Op::IndEq:
    case Op::SeqEq:
    case Op::False:
      return 0;
    case Op::Implies:
      return std::max(size_rec(f.a()), size_rec(f.b()));
    case Op::SepConj:
      return size_rec(f.a()) + size_rec(f.b());
    case Op::Wand:
      return size_rec(f.b());
    default:
      throw FragmentError("size is defined on propositional formulas only");
  }
}

void ind_vars(const IndTerm& t, const std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.is_var() && !bound.count(t.name)) out.insert(t.name);
}

void seq_vars_of(const SeqTerm& t, bool seq_sort, const std::set<std::string>& bound,
                 std::set<std::string>& out) {
  for (const auto& l : t.leaves()) {
    if (l.is_var && seq_sort && !bound.count(l.name)) out.insert(l.name);
    if (!l.is_var && !seq_sort) ind_vars(l.ind, bound, out);
  }
}

void fv_rec(const Formula& f, bool seq_sort, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::IndEq:
      if (!seq_sort) {
        ind_vars(f.lhs_ind(), bound, out);
        ind_vars(f.rhs_ind(), bound, out);
      }
      return;
    case Op::SeqEq:
      seq_vars_of(f.lhs_seq(), seq_sort, bound, out);
      seq_vars_of(f.rhs_seq(), seq_sort, bound, out);
      return;
    case Op::PointsTo:
      if (!seq_sort) ind_vars(f.loc(), bound, out);
      seq_vars_of(f.content(), seq_sort, bound, out);
      return;
    case Op::Not:
      fv_rec(f.a(), seq_sort, bound, out);
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::SepConj:
    case Op::Wand:
      fv_rec(f.a(), seq_sort, bound, out);
      fv_rec(f.b(), seq_sort, bound, out);
      return;
    case Op::ExistsProg:
    case Op::ExistsSeq: {
      if ((f.op() == Op::ExistsSeq) != seq_sort) {
        fv_rec(f.body(), seq_sort, bound, out);
        return;
      }
      bool had = bound.count(f.var()) > 0;
      bound.insert(f.var());
      fv_rec(f.body(), seq_sort, bound, out);
      if (!had) bound.erase(f.var());
      return;
    }
    case Op::Macro:
      fv_rec(expand_macros(f), seq_sort, bound, out);
      return;
    default:
      return;
  }
}

void names_seq(const SeqTerm& t, std::set<std::string>& out) {
  for (const auto& l : t.leaves()) {
    if (l.is_var) out.insert(l.name);
    else if (l.ind.is_var()) out.insert(l.ind.name);
  }
}

void names_rec(const Formula& f, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::IndEq:
      if (f.lhs_ind().is_var()) out.insert(f.lhs_ind().name);
      if (f.rhs_ind().is_var()) out.insert(f.rhs_ind().name);
      return;
    case Op::SeqEq:
      names_seq(f.lhs_seq(), out);
      names_seq(f.rhs_seq(), out);
      return;
    case Op::PointsTo:
      if (f.loc().is_var()) out.insert(f.loc().name);
      names_seq(f.content(), out);
      return;
    case Op::Not:
      names_rec(f.a(), out);
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::SepConj:
    case Op::Wand:
      names_rec(f.a(), out);
      names_rec(f.b(), out);
      return;
    case Op::ExistsProg:
    case Op::ExistsSeq:
      out.insert(f.var());
      names_rec(f.body(), out);
      return;
    case Op::Macro:
      for (const auto& a : f.macro_args()) {
        switch (a.sort) {
          case MacroArg::Sort::Ind:
            if (a.ind.is_var()) out.insert(a.ind.name);
            break;
          case MacroArg::Sort::Seq:
            names_seq(a.seq, out);
            break;
          case MacroArg::Sort::Form:
            names_rec(a.form, out);
            break;
          case MacroArg::Sort::Nat:
            break;
        }
      }
      return;
    default:
      return;
  }
}

void terms_rec(const Formula& f, std::vector<SeqTerm>& norm, std::vector<SeqTerm>& out) {
  auto add = [&](const SeqTerm& t) {
    SeqTerm n = t.normalized();
    for (const auto& m : norm)
      if (m == n) return;
    norm.push_back(n);
    out.push_back(t);
  };
  switch (f.op()) {
    case Op::IndEq:
      add(SeqTerm::lift(f.lhs_ind()));
      add(SeqTerm::lift(f.rhs_ind()));
      return;
    case Op::SeqEq:
      add(f.lhs_seq());
      add(f.rhs_seq());
      return;
    case Op::PointsTo:
      add(SeqTerm::lift(f.loc()));
      add(f.content());
      return;
    case Op::Not:
    case Op::ExistsProg:
    case Op::ExistsSeq:
      terms_rec(f.a(), norm, out);
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::SepConj:
    case Op::Wand:
      terms_rec(f.a(), norm, out);
      terms_rec(f.b(), norm, out);
      return;
    case Op::Macro:
      terms_rec(expand_macros(f), norm, out);
      return;
    default:
      return;
  }
}

bool ind_ok(const IndTerm& t, bool allow_constants) {
  return t.kind != IndTerm::Kind::Nat || allow_constants;
}

bool pseqsl_rec(const Formula& f, bool allow_constants, std::string& why) {
  auto seq_ok = [&](const SeqTerm& t) {
    for (const auto& l : t.leaves())
      if (!l.is_var && !ind_ok(l.ind, allow_constants)) {
        why = "natural constant " + to_string(l.ind) + " in a sequence term";
        return false;
      }
    return true;
  };
  switch (f.op()) {
    case Op::IndEq:
      if (!ind_ok(f.lhs_ind(), allow_constants) || !ind_ok(f.rhs_ind(), allow_constants)) {
        why = "natural constant in an individual equality";
        return false;
      }
      return true;
    case Op::SeqEq:
      return seq_ok(f.lhs_seq()) && seq_ok(f.rhs_seq());
    case Op::PointsTo:
      if (!f.loc().is_var() && !allow_constants) {
        why = "points-to location must be a program variable";
        return false;
      }
      return seq_ok(f.content());
    case Op::Emp:
    case Op::False:
      return true;
    case Op::Implies:
    case Op::SepConj:
    case Op::Wand:
      return pseqsl_rec(f.a(), allow_constants, why) && pseqsl_rec(f.b(), allow_constants, why);
    case Op::ExistsProg:
    case Op::ExistsSeq:
      why = "quantifier over " + f.var();
      return false;
    default:
      why = "operator outside the propositional fragment";
      return false;
  }
}

IndTerm rename_ind(const IndTerm& t, const std::string& from, const std::string& to) {
  return t.is_var() && t.name == from ? IndTerm::var(to) : t;
}

SeqTerm map_seq(const SeqTerm& t, const std::function<SeqTerm(const SeqTerm&)>& leaf) {
  switch (t.kind()) {
    case SeqTerm::Kind::Empty:
      return t;
    case SeqTerm::Kind::Concat:
      return SeqTerm::concat(map_seq(t.left(), leaf), map_seq(t.right(), leaf));
    default:
      return leaf(t);
  }
}

Formula rename_rec(const Formula& f, bool seq_sort, const std::string& from, const std::string& to) {
  auto rs = [&](const SeqTerm& t) {
    return map_seq(t, [&](const SeqTerm& l) {
      if (seq_sort && l.kind() == SeqTerm::Kind::Var && l.name() == from) return SeqTerm::var(to);
      if (!seq_sort && l.kind() == SeqTerm::Kind::Lift) return SeqTerm::lift(rename_ind(l.ind(), from, to));
      return l;
    });
  };
  auto ri = [&](const IndTerm& t) { return seq_sort ? t : rename_ind(t, from, to); };
  auto rec = [&](const Formula& g) { return rename_rec(g, seq_sort, from, to); };
  switch (f.op()) {
    case Op::IndEq:
      return mk::ind_eq(ri(f.lhs_ind()), ri(f.rhs_ind()));
    case Op::SeqEq:
      return mk::seq_eq(rs(f.lhs_seq()), rs(f.rhs_seq()));
    case Op::PointsTo:
      return mk::points_to(ri(f.loc()), rs(f.content()));
    case Op::Not:
      return mk::not_(rec(f.a()));
    case Op::And:
      return mk::and_(rec(f.a()), rec(f.b()));
    case Op::Or:
      return mk::or_(rec(f.a()), rec(f.b()));
    case Op::Implies:
      return mk::implies(rec(f.a()), rec(f.b()));
    case Op::SepConj:
      return mk::sep(rec(f.a()), rec(f.b()));
    case Op::Wand:
      return mk::wand(rec(f.a()), rec(f.b()));
    case Op::ExistsProg:
      if (!seq_sort && f.var() == from) return f;
      return mk::exists_prog(f.var(), rec(f.body()));
    case Op::ExistsSeq:
      if (seq_sort && f.var() == from) return f;
      return mk::exists_seq(f.var(), rec(f.body()));
    case Op::Macro: {
      std::vector<MacroArg> args;
      for (const auto& a : f.macro_args()) {
        switch (a.sort) {
          case MacroArg::Sort::Ind:
            args.push_back(MacroArg::of_ind(ri(a.ind)));
            break;
          case MacroArg::Sort::Seq:
            args.push_back(MacroArg::of_seq(rs(a.seq)));
            break;
          case MacroArg::Sort::Form:
            args.push_back(MacroArg::of_form(rec(a.form)));
            break;
          case MacroArg::Sort::Nat:
            args.push_back(a);
            break;
        }
      }
      return mk::macro(f.macro_name(), std::move(args));
    }
    default:
      return f;
  }
}

class Apart {
 public:
  explicit Apart(const Formula& f) : taken_(all_names(f)) {
    for (const auto& v : free_prog_vars(f)) used_.insert(v);
    for (const auto& v : free_seq_vars(f)) used_.insert(v);
  }

  Formula run(const Formula& f) {
    switch (f.op()) {
      case Op::Not:
        return mk::not_(run(f.a()));
      case Op::And:
        return mk::and_(run(f.a()), run(f.b()));
      case Op::Or:
        return mk::or_(run(f.a()), run(f.b()));
      case Op::Implies:
        return mk::implies(run(f.a()), run(f.b()));
      case Op::SepConj:
        return mk::sep(run(f.a()), run(f.b()));
      case Op::Wand:
        return mk::wand(run(f.a()), run(f.b()));
      case Op::ExistsProg:
      case Op::ExistsSeq: {
        bool seq = f.op() == Op::ExistsSeq;
        std::string name = f.var();
        Formula body = f.body();
        if (used_.count(name)) {
          std::string fresh;
          do {
            fresh = name + "_" + std::to_string(++counter_);
          } while (taken_.count(fresh) || used_.count(fresh));
          taken_.insert(fresh);
          body = rename_rec(body, seq, name, fresh);
          name = fresh;
        }
        used_.insert(name);
        body = run(body);
        return seq ? mk::exists_seq(name, body) : mk::exists_prog(name, body);
      }
      default:
        return f;
    }
  }

 private:
  std::set<std::string> taken_;
  std::set<std::string> used_;
  int counter_ = 0;
};

std::vector<Binder> flip(std::vector<Binder> p) {
  for (auto& b : p) b.universal = !b.universal;
  return p;
}

std::vector<Binder> merge(const std::vector<Binder>& p1, const std::vector<Binder>& p2) {
  std::vector<Binder> out;
  std::size_t i = 0, j = 0;
  while (i < p1.size() || j < p2.size()) {
    bool q = (i < p1.size() && p1[i].universal) || (j < p2.size() && p2[j].universal);
    while (i < p1.size() && p1[i].universal == q) out.push_back(p1[i++]);
    while (j < p2.size() && p2[j].universal == q) out.push_back(p2[j++]);
  }
  return out;
}

Prenex hoist(const Formula& f) {
  switch (f.op()) {
    case Op::Not: {
      Prenex p = hoist(f.a());
      return {flip(p.prefix), mk::not_(p.matrix)};
    }
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      Prenex a = hoist(f.a());
      Prenex b = hoist(f.b());
      Formula m = f.op() == Op::And  ? mk::and_(a.matrix, b.matrix)
                  : f.op() == Op::Or ? mk::or_(a.matrix, b.matrix)
                                     : mk::implies(a.matrix, b.matrix);
      auto pa = f.op() == Op::Implies ? flip(a.prefix) : a.prefix;
      return {merge(pa, b.prefix), m};
    }
    case Op::SepConj:
    case Op::Wand:
      if (!is_quantifier_free(f.a()) || !is_quantifier_free(f.b()))
        throw FragmentError("cannot hoist a quantifier across * or -*");
      return {{}, f};
    case Op::ExistsProg:
    case Op::ExistsSeq: {
      Prenex p = hoist(f.body());
      p.prefix.insert(p.prefix.begin(), Binder{false, f.op() == Op::ExistsSeq, f.var()});
      return p;
    }
    default:
      return {{}, f};
  }
}

int blocks(const std::vector<Binder>& prefix, bool seq) {
  int n = 0;
  bool have = false, last = false;
  for (const auto& b : prefix) {
    if (b.seq != seq) continue;
    if (!have || b.universal != last) ++n;
    have = true;
    last = b.universal;
  }
  return n;
}

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f.op() == Op::And) {
    flatten_and(f.a(), out);
    flatten_and(f.b(), out);
  } else {
    out.push_back(f);
  }
}

bool conjunct_shape_ok(const std::vector<Binder>& p) {
  bool all_forall = true;
  for (const auto& b : p) all_forall = all_forall && b.universal;
  if (all_forall) return true;
  std::size_t i = 0;
  while (i < p.size() && p[i].universal && !p[i].seq) ++i;
  for (; i < p.size(); ++i)
    if (p[i].universal) return false;
  return true;
}

}  // namespace

Formula desugar(const Formula& f) {
  Formula storage;
  return desugar_rec(expanded(f, storage));
}

std::size_t formula_size(const Formula& f) { return size_rec(desugar(f)); }

std::set<std::string> free_prog_vars(const Formula& f) {
  std::set<std::string> bound, out;
  fv_rec(f, false, bound, out);
  return out;
}

std::set<std::string> free_seq_vars(const Formula& f) {
  std::set<std::string> bound, out;
  fv_rec(f, true, bound, out);
  return out;
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  names_rec(f, out);
  return out;
}

std::vector<SeqTerm> seq_terms(const Formula& f) {
  std::vector<SeqTerm> norm, out;
  terms_rec(f, norm, out);
  return out;
}

bool is_quantifier_free(const Formula& f) {
  switch (f.op()) {
    case Op::ExistsProg:
    case Op::ExistsSeq:
      return false;
    case Op::Not:
      return is_quantifier_free(f.a());
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::SepConj:
    case Op::Wand:
      return is_quantifier_free(f.a()) && is_quantifier_free(f.b());
    case Op::Macro:
      return is_quantifier_free(expand_macros(f));
    default:
      return true;
  }
}

bool is_pseqsl(const Formula& f, std::string* why, bool allow_constants) {
  std::string reason;
  bool ok = false;
  try {
    ok = pseqsl_rec(desugar(f), allow_constants, reason);
  } catch (const MacroError& e) {
    reason = e.what();
  }
  if (!ok && why) *why = reason;
  return ok;
}

void require_pseqsl(const Formula& f, bool allow_constants) {
  std::string why;
  if (!is_pseqsl(f, &why, allow_constants)) throw FragmentError("not a PSeqSL formula: " + why);
}

Formula rename_prog(const Formula& f, const std::string& from, const std::string& to) {
  return rename_rec(f, false, from, to);
}

Formula rename_seq(const Formula& f, const std::string& from, const std::string& to) {
  return rename_rec(f, true, from, to);
}

Prenex prenex(const Formula& f) {
  Formula storage;
  const Formula& g = expanded(f, storage);
  return hoist(Apart(g).run(g));
}

Formula close_prefix(const std::vector<Binder>& prefix, const Formula& matrix) {
  Formula out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    if (it->universal)
      out = it->seq ? mk::forall_seq(it->name, out) : mk::forall_prog(it->name, out);
    else
      out = it->seq ? mk::exists_seq(it->name, out) : mk::exists_prog(it->name, out);
  }
  return out;
}

FragmentClass classify(const Formula& f) {
  Formula storage;
  const Formula& g = expanded(f, storage);
  FragmentClass c;
  if (is_quantifier_free(g)) return c;
  c.quantifier_free = false;
  Prenex p = prenex(g);
  c.prog_blocks = blocks(p.prefix, false);
  c.seq_blocks = blocks(p.prefix, true);
  bool any_forall = false, any_exists = false;
  for (const auto& b : p.prefix) (b.universal ? any_forall : any_exists) = true;
  if (!any_forall) {
    c.shape = Shape::Sigma1;
    return c;
  }
  if (!any_exists) {
    c.shape = Shape::Pi1;
    return c;
  }
  std::vector<Formula> conjuncts;
  flatten_and(g, conjuncts);
  c.shape = Shape::ForallExistsConj;
  for (const auto& conj : conjuncts) {
    if (!conjunct_shape_ok(prenex(conj).prefix)) {
      c.shape = Shape::Other;
      break;
    }
  }
  return c;
}

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::Sigma1:
      return "Sigma1";
    case Shape::Pi1:
      return "Pi1";
    case Shape::ForallExistsConj:
      return "forall*forall* & forall*exists*exists*";
    case Shape::Other:
      break;
  }
  return "Other";
}

}  // namespace seqsl
