#include "seqsl/formula.hpp"

#include <stdexcept>

namespace seqsl {

IndTerm IndTerm::constant(Value v) {
  switch (v.kind()) {
    case Value::Kind::Nil:
      return nil();
    case Value::Kind::Hash:
      return hash();
    case Value::Kind::Nat:
      break;
  }
  return nat(v.nat_value());
}

Value IndTerm::value() const {
  switch (kind) {
    case Kind::Nil:
      return Value::nil();
    case Kind::Hash:
      return Value::hash();
    case Kind::Nat:
      return Value::nat(n);
    case Kind::Var:
      break;
  }
  throw std::logic_error("variable has no constant value");
}

// ---- SeqTerm ----

SeqTerm::SeqTerm() {
  static const std::shared_ptr<const Node> kEmpty = std::make_shared<Node>();
  node_ = kEmpty;
}

SeqTerm SeqTerm::lift(IndTerm t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lift;
  n->ind = std::move(t);
  return SeqTerm(std::move(n));
}

SeqTerm SeqTerm::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return SeqTerm(std::move(n));
}

SeqTerm SeqTerm::concat(SeqTerm a, SeqTerm b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Concat;
  n->left = std::make_shared<const SeqTerm>(std::move(a));
  n->right = std::make_shared<const SeqTerm>(std::move(b));
  return SeqTerm(std::move(n));
}

SeqTerm SeqTerm::from_leaves(const std::vector<SeqLeaf>& leaves) {
  SeqTerm out;
  bool first = true;
  for (const auto& l : leaves) {
    SeqTerm t = l.is_var ? var(l.name) : lift(l.ind);
    out = first ? t : concat(out, t);
    first = false;
  }
  return out;
}

SeqTerm SeqTerm::of_word(const Word& w) {
  std::vector<SeqLeaf> leaves;
  leaves.reserve(w.size());
  for (Value v : w) leaves.push_back(SeqLeaf::of(IndTerm::constant(v)));
  return from_leaves(leaves);
}

void SeqTerm::collect(std::vector<SeqLeaf>& out) const {
  switch (kind()) {
    case Kind::Empty:
      return;
    case Kind::Lift:
      out.push_back(SeqLeaf::of(ind()));
      return;
    case Kind::Var:
      out.push_back(SeqLeaf::seq_var(name()));
      return;
    case Kind::Concat:
      left().collect(out);
      right().collect(out);
      return;
  }
}

std::vector<SeqLeaf> SeqTerm::leaves() const {
  std::vector<SeqLeaf> out;
  collect(out);
  return out;
}

bool SeqTerm::operator==(const SeqTerm& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::Empty:
      return true;
    case Kind::Lift:
      return ind() == o.ind();
    case Kind::Var:
      return name() == o.name();
    case Kind::Concat:
      return left() == o.left() && right() == o.right();
  }
  return false;
}

// ---- Formula ----

namespace {
std::shared_ptr<FormulaNode> node(Op op) {
  auto n = std::make_shared<FormulaNode>();
  n->op = op;
  return n;
}
}  // namespace

Formula::Formula() = default;

const FormulaNode& Formula::true_node() {
  static const FormulaNode n;
  return n;
}

bool MacroArg::operator==(const MacroArg& o) const {
  if (sort != o.sort) return false;
  switch (sort) {
    case Sort::Ind:
      return ind == o.ind;
    case Sort::Seq:
      return seq == o.seq;
    case Sort::Nat:
      return n == o.n;
    case Sort::Form:
      return form == o.form;
  }
  return false;
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  const FormulaNode& x = node();
  const FormulaNode& y = o.node();
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::IndEq:
      return x.t1 == y.t1 && x.t2 == y.t2;
    case Op::SeqEq:
      return x.s1 == y.s1 && x.s2 == y.s2;
    case Op::PointsTo:
      return x.t1 == y.t1 && x.s1 == y.s1;
    case Op::Not:
      return x.a == y.a;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::SepConj:
    case Op::Wand:
      return x.a == y.a && x.b == y.b;
    case Op::ExistsProg:
    case Op::ExistsSeq:
      return x.var == y.var && x.a == y.a;
    case Op::Macro:
      return x.macro == y.macro && x.args == y.args;
    case Op::Emp:
    case Op::False:
    case Op::True:
      return true;
  }
  return false;
}

namespace mk {

Formula ind_eq(IndTerm a, IndTerm b) {
  auto n = node(Op::IndEq);
  n->t1 = std::move(a);
  n->t2 = std::move(b);
  return Formula(std::move(n));
}

Formula seq_eq(SeqTerm a, SeqTerm b) {
  auto n = node(Op::SeqEq);
  n->s1 = std::move(a);
  n->s2 = std::move(b);
  return Formula(std::move(n));
}

Formula not_(Formula a) {
  auto n = node(Op::Not);
  n->a = std::move(a);
  return Formula(std::move(n));
}

static Formula binary(Op op, Formula a, Formula b) {
  auto n = node(op);
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula and_(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula or_(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return binary(Op::Implies, std::move(a), std::move(b)); }
Formula sep(Formula a, Formula b) { return binary(Op::SepConj, std::move(a), std::move(b)); }
Formula wand(Formula a, Formula b) { return binary(Op::Wand, std::move(a), std::move(b)); }

Formula emp() { return Formula(node(Op::Emp)); }
Formula false_() { return Formula(node(Op::False)); }
Formula true_() { return Formula(node(Op::True)); }

Formula points_to(IndTerm x, SeqTerm t) {
  auto n = node(Op::PointsTo);
  n->t1 = std::move(x);
  n->s1 = std::move(t);
  return Formula(std::move(n));
}

Formula exists_prog(std::string x, Formula body) {
  auto n = node(Op::ExistsProg);
  n->var = std::move(x);
  n->a = std::move(body);
  return Formula(std::move(n));
}

Formula exists_seq(std::string a, Formula body) {
  auto n = node(Op::ExistsSeq);
  n->var = std::move(a);
  n->a = std::move(body);
  return Formula(std::move(n));
}

Formula forall_prog(std::string x, Formula body) {
  return not_(exists_prog(std::move(x), not_(std::move(body))));
}

Formula forall_seq(std::string a, Formula body) {
  return not_(exists_seq(std::move(a), not_(std::move(body))));
}

Formula macro(std::string name, std::vector<MacroArg> args) {
  auto n = node(Op::Macro);
  n->macro = std::move(name);
  n->args = std::move(args);
  return Formula(std::move(n));
}

static Formula fold(const std::vector<Formula>& fs, Formula unit, Formula (*f)(Formula, Formula)) {
  if (fs.empty()) return unit;
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = f(out, fs[i]);
  return out;
}

Formula and_all(const std::vector<Formula>& fs) { return fold(fs, true_(), and_); }
Formula or_all(const std::vector<Formula>& fs) { return fold(fs, false_(), or_); }
Formula sep_all(const std::vector<Formula>& fs) { return fold(fs, emp(), sep); }

Formula ind_ne(IndTerm a, IndTerm b) { return not_(ind_eq(std::move(a), std::move(b))); }

Formula hook(IndTerm x, SeqTerm t) { return sep(points_to(std::move(x), std::move(t)), true_()); }

}  // namespace mk

SeqTerm cat(const std::vector<SeqTerm>& parts) {
  if (parts.empty()) return SeqTerm::empty();
  SeqTerm out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = SeqTerm::concat(out, parts[i]);
  return out;
}

SeqTerm sv(const std::string& name) { return SeqTerm::var(name); }
SeqTerm lift_var(const std::string& name) { return SeqTerm::lift(IndTerm::var(name)); }
IndTerm iv(const std::string& name) { return IndTerm::var(name); }

SeqTerm nil_block(std::size_t k) {
  std::vector<SeqTerm> parts(k, SeqTerm::lift(IndTerm::nil()));
  return cat(parts);
}

}  // namespace seqsl
