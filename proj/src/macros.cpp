#include "seqsl/macros.hpp"

#include <map>
#include <set>

#include "seqsl/analysis.hpp"
#include "seqsl/errors.hpp"

namespace seqsl {

namespace {

using S = MacroArg::Sort;

const std::map<std::string, std::vector<S>>& signatures() {
  static const std::map<std::string, std::vector<S>> table = {
      {"hook", {S::Ind, S::Seq}},
      {"septraction", {S::Form, S::Form}},
      {"alloc", {S::Ind}},
      {"alloc_pseqsl", {S::Ind}},
      {"in", {S::Ind, S::Seq}},
      {"len_eq", {S::Seq, S::Nat}},
      {"len_le", {S::Seq, S::Nat}},
      {"len_ge", {S::Seq, S::Nat}},
      {"lookup", {S::Ind, S::Seq, S::Nat}},
      {"eqidx", {S::Seq, S::Nat, S::Seq, S::Nat}},
      {"lt", {S::Ind, S::Ind, S::Nat}},
      {"inc", {S::Seq, S::Nat}},
      {"diff", {S::Seq}},
      {"seg", {S::Seq, S::Seq}},
      {"trunc", {S::Seq, S::Seq, S::Nat, S::Nat}},
      {"ini", {S::Seq}},
      {"outdeg", {S::Ind, S::Nat}},
      {"edge", {S::Ind, S::Ind}},
      {"reach", {S::Nat, S::Ind, S::Ind}},
      {"reach_le", {S::Ind, S::Ind, S::Nat}},
      {"inc_index", {S::Seq, S::Nat}},
      {"two_tier", {S::Ind, S::Seq}},
      {"sapling", {S::Ind, S::Ind}},
  };
  return table;
}

class Namer {
 public:
  explicit Namer(std::set<std::string> taken) : taken_(std::move(taken)) {}
  std::string operator()(const std::string& base) {
    std::string n;
    do {
      n = base + "_" + std::to_string(++counter_);
    } while (taken_.count(n));
    taken_.insert(n);
    return n;
  }

 private:
  std::set<std::string> taken_;
  int counter_ = 0;
};

Formula hook(IndTerm x, SeqTerm t) { return mk::hook(std::move(x), std::move(t)); }

Formula unit(const SeqTerm& b, Namer& fresh) {
  std::string y = fresh("y");
  return mk::or_all({mk::exists_prog(y, mk::seq_eq(b, lift_var(y))),
                     mk::seq_eq(b, SeqTerm::lift(IndTerm::nil())),
                     mk::seq_eq(b, SeqTerm::lift(IndTerm::hash()))});
}

Formula len_eq(const SeqTerm& t, std::uint64_t n, Namer& fresh) {
  std::vector<std::string> bs;
  for (std::uint64_t i = 0; i < n; ++i) bs.push_back(fresh("b"));
  std::vector<SeqTerm> parts;
  for (const auto& b : bs) parts.push_back(sv(b));
  std::vector<Formula> conj{mk::seq_eq(t, cat(parts))};
  for (const auto& b : bs) conj.push_back(unit(sv(b), fresh));
  Formula body = mk::and_all(conj);
  for (auto it = bs.rbegin(); it != bs.rend(); ++it) body = mk::exists_seq(*it, body);
  return body;
}

Formula lookup(const IndTerm& x, const SeqTerm& t, std::uint64_t i, Namer& fresh) {
  if (i == 0) return mk::false_();
  std::string a1 = fresh("a"), a2 = fresh("a");
  Formula body = mk::and_(mk::seq_eq(t, cat({sv(a1), SeqTerm::lift(x), sv(a2)})), len_eq(sv(a1), i - 1, fresh));
  return mk::exists_seq(a1, mk::exists_seq(a2, body));
}

Formula lt(const IndTerm& x, const IndTerm& y, std::uint64_t bound) {
  std::vector<Formula> cases;
  for (std::uint64_t j = 1; j <= bound; ++j)
    for (std::uint64_t i = 0; i < j; ++i)
      cases.push_back(mk::and_(mk::ind_eq(x, IndTerm::nat(i)), mk::ind_eq(y, IndTerm::nat(j))));
  return mk::or_all(cases);
}

// forall x1 x2 a1 a2 a3. t == a1 ^ x1 ^ a2 ^ x2 ^ a3 => rel(x1, x2)
template <class Rel>
Formula pairwise(const SeqTerm& t, Namer& fresh, Rel rel) {
  std::string x1 = fresh("x"), x2 = fresh("x");
  std::string a1 = fresh("a"), a2 = fresh("a"), a3 = fresh("a");
  Formula body = mk::implies(
      mk::seq_eq(t, cat({sv(a1), lift_var(x1), sv(a2), lift_var(x2), sv(a3)})), rel(iv(x1), iv(x2)));
  for (const auto& a : {a3, a2, a1}) body = mk::forall_seq(a, body);
  for (const auto& x : {x2, x1}) body = mk::forall_prog(x, body);
  return body;
}

Formula edge(const IndTerm& x1, const IndTerm& x2, Namer& fresh) {
  std::string l1 = fresh("a"), l2 = fresh("a"), ax = fresh("a");
  Formula body = hook(x1, cat({sv(l1), SeqTerm::lift(x2), sv(l2), SeqTerm::lift(IndTerm::hash()), sv(ax)}));
  return mk::exists_seq(l1, mk::exists_seq(l2, mk::exists_seq(ax, body)));
}

Formula reach(std::uint64_t n, const IndTerm& x1, const IndTerm& x2, Namer& fresh) {
  if (n == 0) return mk::ind_eq(x1, x2);
  std::string x3 = fresh("x");
  return mk::exists_prog(x3, mk::sep(edge(x1, iv(x3), fresh), reach(n - 1, iv(x3), x2, fresh)));
}

std::vector<Formula> sapling_psis(const IndTerm& x0, const IndTerm& x0p, Namer& fresh) {
  std::string x1 = fresh("x"), x2 = fresh("x"), x3 = fresh("x"), x4 = fresh("x");
  std::string a1 = fresh("a"), a2 = fresh("a");
  Formula psi1 = mk::implies(mk::sep(hook(iv(x1), cat({lift_var(x3), sv(a1)})),
                                     hook(iv(x2), cat({lift_var(x4), sv(a2)}))),
                             mk::ind_ne(iv(x3), iv(x4)));
  psi1 = mk::forall_seq(a1, mk::forall_seq(a2, psi1));
  for (const auto& x : {x4, x3, x2, x1}) psi1 = mk::forall_prog(x, psi1);

  std::string y1 = fresh("x"), b = fresh("a");
  Formula psi2 = mk::forall_prog(
      y1, mk::forall_seq(b, mk::not_(hook(iv(y1), cat({SeqTerm::lift(x0), sv(b)})))));

  std::string z1 = fresh("x"), c = fresh("a");
  Formula psi3 = mk::and_(
      mk::exists_prog(z1, hook(x0, SeqTerm::concat(lift_var(z1), SeqTerm::empty()))),
      mk::exists_seq(c, hook(x0p, SeqTerm::concat(SeqTerm::empty(), sv(c)))));

  std::string w1 = fresh("x"), w2 = fresh("x"), w3 = fresh("x");
  std::string d1 = fresh("a"), d2 = fresh("a");
  Formula psi4 = mk::implies(
      mk::and_(hook(iv(w1), cat({lift_var(w2), sv(d1)})), mk::ind_ne(iv(w2), x0p)),
      hook(iv(w2), cat({lift_var(w3), sv(d2)})));
  psi4 = mk::exists_prog(w3, mk::exists_seq(d1, mk::exists_seq(d2, psi4)));
  psi4 = mk::forall_prog(w1, mk::forall_prog(w2, psi4));
  return {psi1, psi2, psi3, psi4};
}

Formula define(const std::string& name, const std::vector<MacroArg>& a, Namer& fresh) {
  if (name == "hook") return hook(a[0].ind, a[1].seq);
  if (name == "septraction") return mk::not_(mk::wand(a[0].form, mk::not_(a[1].form)));
  if (name == "alloc") {
    std::string x = fresh("a");
    return mk::exists_seq(x, hook(a[0].ind, sv(x)));
  }
  if (name == "alloc_pseqsl")
    return mk::wand(mk::points_to(a[0].ind, SeqTerm::lift(IndTerm::nil())), mk::false_());
  if (name == "in") {
    std::string a1 = fresh("a"), a2 = fresh("a");
    return mk::exists_seq(
        a1, mk::exists_seq(a2, mk::seq_eq(a[1].seq, cat({sv(a1), SeqTerm::lift(a[0].ind), sv(a2)}))));
  }
  if (name == "len_eq") return len_eq(a[0].seq, a[1].n, fresh);
  if (name == "len_le") {
    std::vector<Formula> cases;
    for (std::uint64_t i = 0; i <= a[1].n; ++i) cases.push_back(len_eq(a[0].seq, i, fresh));
    return mk::or_all(cases);
  }
  if (name == "len_ge") {
    std::string b = fresh("a"), c = fresh("a");
    return mk::exists_seq(
        b, mk::exists_seq(c, mk::and_(mk::seq_eq(a[0].seq, cat({sv(b), sv(c)})), len_eq(sv(b), a[1].n, fresh))));
  }
  if (name == "lookup") return lookup(a[0].ind, a[1].seq, a[2].n, fresh);
  if (name == "eqidx") {
    std::string x3 = fresh("x");
    return mk::exists_prog(x3, mk::and_(lookup(iv(x3), a[0].seq, a[1].n, fresh),
                                        lookup(iv(x3), a[2].seq, a[3].n, fresh)));
  }
  if (name == "lt") return lt(a[0].ind, a[1].ind, a[2].n);
  if (name == "inc") {
    std::uint64_t bound = a[1].n;
    return pairwise(a[0].seq, fresh, [&](const IndTerm& x, const IndTerm& y) { return lt(x, y, bound); });
  }
  if (name == "diff")
    return pairwise(a[0].seq, fresh, [](const IndTerm& x, const IndTerm& y) { return mk::ind_ne(x, y); });
  if (name == "seg") {
    std::string a3 = fresh("a"), a4 = fresh("a");
    return mk::exists_seq(a3, mk::exists_seq(a4, mk::seq_eq(a[1].seq, cat({sv(a3), a[0].seq, sv(a4)}))));
  }
  if (name == "trunc") {
    if (a[2].n == 0 || a[3].n == 0) return mk::false_();
    std::string a3 = fresh("a"), a4 = fresh("a");
    Formula body = mk::and_all({mk::seq_eq(a[1].seq, cat({sv(a3), a[0].seq, sv(a4)})),
                                len_eq(sv(a3), a[2].n - 1, fresh),
                                len_eq(SeqTerm::concat(sv(a3), a[0].seq), a[3].n - 1, fresh)});
    return mk::exists_seq(a3, mk::exists_seq(a4, body));
  }
  if (name == "ini") {
    SeqTerm nil = SeqTerm::lift(IndTerm::nil());
    return mk::seq_eq(SeqTerm::concat(nil, a[0].seq), SeqTerm::concat(a[0].seq, nil));
  }
  if (name == "outdeg") {
    std::string l = fresh("a"), x = fresh("a");
    Formula body = mk::and_(hook(a[0].ind, cat({sv(l), SeqTerm::lift(IndTerm::hash()), sv(x)})),
                            len_eq(sv(l), a[1].n, fresh));
    return mk::exists_seq(l, mk::exists_seq(x, body));
  }
  if (name == "edge") return edge(a[0].ind, a[1].ind, fresh);
  if (name == "reach") return reach(a[0].n, a[1].ind, a[2].ind, fresh);
  if (name == "reach_le") {
    std::vector<Formula> cases;
    for (std::uint64_t n = 0; n <= a[2].n; ++n) cases.push_back(reach(n, a[0].ind, a[1].ind, fresh));
    return mk::or_all(cases);
  }
  if (name == "inc_index") {
    std::uint64_t n = a[1].n;
    const SeqTerm& t = a[0].seq;
    return mk::and_all({pairwise(t, fresh, [&](const IndTerm& x, const IndTerm& y) { return lt(x, y, n + 1); }),
                        len_eq(t, n + 1, fresh), lookup(IndTerm::nat(1), t, 1, fresh),
                        lookup(IndTerm::nat(n + 1), t, n + 1, fresh)});
  }
  if (name == "two_tier") {
    SeqTerm hash = SeqTerm::lift(IndTerm::hash());
    std::string l1 = fresh("x"), ax = fresh("a");
    Formula inner = mk::implies(mk::macro("in", {MacroArg::of_ind(iv(l1)), a[1]}),
                                hook(iv(l1), cat({SeqTerm::empty(), hash, sv(ax)})));
    return mk::sep(hook(a[0].ind, cat({a[1].seq, hash, SeqTerm::empty()})),
                   mk::forall_prog(l1, mk::exists_seq(ax, inner)));
  }
  if (name == "sapling") return mk::and_all(sapling_psis(a[0].ind, a[1].ind, fresh));
  throw MacroError("unknown macro " + name);
}

Formula expand(const Formula& f, Namer& fresh) {
  auto rec = [&](const Formula& g) { return expand(g, fresh); };
  switch (f.op()) {
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
      return mk::exists_prog(f.var(), rec(f.body()));
    case Op::ExistsSeq:
      return mk::exists_seq(f.var(), rec(f.body()));
    case Op::Macro: {
      const auto* sig = macro_signature(f.macro_name());
      if (!sig) throw MacroError("unknown macro " + f.macro_name());
      const auto& args = f.macro_args();
      if (args.size() != sig->size())
        throw MacroError("macro " + f.macro_name() + " takes " + std::to_string(sig->size()) + " arguments");
      for (std::size_t i = 0; i < args.size(); ++i)
        if (args[i].sort != (*sig)[i])
          throw MacroError("argument " + std::to_string(i + 1) + " of " + f.macro_name() + " has the wrong sort");
      return rec(define(f.macro_name(), args, fresh));
    }
    default:
      return f;
  }
}

}  // namespace

const std::vector<MacroArg::Sort>* macro_signature(const std::string& name) {
  auto it = signatures().find(name);
  return it == signatures().end() ? nullptr : &it->second;
}

std::vector<std::string> macro_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : signatures()) out.push_back(k);
  return out;
}

bool has_macros(const Formula& f) {
  switch (f.op()) {
    case Op::Macro:
      return true;
    case Op::Not:
    case Op::ExistsProg:
    case Op::ExistsSeq:
      return has_macros(f.a());
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::SepConj:
    case Op::Wand:
      return has_macros(f.a()) || has_macros(f.b());
    default:
      return false;
  }
}

Formula expand_macros(const Formula& f) {
  if (!has_macros(f)) return f;
  Namer fresh(all_names(f));
  return expand(f, fresh);
}

std::vector<Formula> sapling_parts(const IndTerm& x0, const IndTerm& x0p) {
  std::set<std::string> taken;
  if (x0.is_var()) taken.insert(x0.name);
  if (x0p.is_var()) taken.insert(x0p.name);
  Namer fresh(taken);
  return sapling_psis(x0, x0p, fresh);
}

namespace lib {

Formula call(const std::string& name, std::vector<MacroArg> args) { return mk::macro(name, std::move(args)); }
Formula hook(IndTerm x, SeqTerm t) { return call("hook", {MacroArg::of_ind(std::move(x)), MacroArg::of_seq(std::move(t))}); }
Formula septraction(Formula a, Formula b) {
  return call("septraction", {MacroArg::of_form(std::move(a)), MacroArg::of_form(std::move(b))});
}
Formula alloc(IndTerm x) { return call("alloc", {MacroArg::of_ind(std::move(x))}); }
Formula alloc_pseqsl(IndTerm x) { return call("alloc_pseqsl", {MacroArg::of_ind(std::move(x))}); }
Formula in(IndTerm x, SeqTerm t) { return call("in", {MacroArg::of_ind(std::move(x)), MacroArg::of_seq(std::move(t))}); }
Formula len_eq(SeqTerm t, std::uint64_t n) { return call("len_eq", {MacroArg::of_seq(std::move(t)), MacroArg::of_nat(n)}); }
Formula len_le(SeqTerm t, std::uint64_t n) { return call("len_le", {MacroArg::of_seq(std::move(t)), MacroArg::of_nat(n)}); }
Formula len_ge(SeqTerm t, std::uint64_t n) { return call("len_ge", {MacroArg::of_seq(std::move(t)), MacroArg::of_nat(n)}); }
Formula lookup(IndTerm x, SeqTerm t, std::uint64_t i) {
  return call("lookup", {MacroArg::of_ind(std::move(x)), MacroArg::of_seq(std::move(t)), MacroArg::of_nat(i)});
}
Formula outdeg(IndTerm x, std::uint64_t n) { return call("outdeg", {MacroArg::of_ind(std::move(x)), MacroArg::of_nat(n)}); }
Formula edge(IndTerm x1, IndTerm x2) { return call("edge", {MacroArg::of_ind(std::move(x1)), MacroArg::of_ind(std::move(x2))}); }
Formula reach(std::uint64_t n, IndTerm x1, IndTerm x2) {
  return call("reach", {MacroArg::of_nat(n), MacroArg::of_ind(std::move(x1)), MacroArg::of_ind(std::move(x2))});
}
Formula ini(SeqTerm t) { return call("ini", {MacroArg::of_seq(std::move(t))}); }

}  // namespace lib

}  // namespace seqsl
