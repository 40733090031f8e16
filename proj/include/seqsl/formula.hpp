#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "seqsl/value.hpp"

namespace seqsl {

// t_x ::= nil | # | n | x
struct IndTerm {
  enum class Kind : std::uint8_t { Nil, Hash, Nat, Var };
  Kind kind = Kind::Nil;
  std::uint64_t n = 0;
  std::string name;

  static IndTerm nil() { return {Kind::Nil, 0, {}}; }
  static IndTerm hash() { return {Kind::Hash, 0, {}}; }
  static IndTerm nat(std::uint64_t v) { return {Kind::Nat, v, {}}; }
  static IndTerm var(std::string x) { return {Kind::Var, 0, std::move(x)}; }
  static IndTerm constant(Value v);

  bool is_var() const { return kind == Kind::Var; }
  Value value() const;  // only for constants

  auto operator<=>(const IndTerm&) const = default;
};

// A leaf of a flattened sequence term: an individual term or a sequence variable.
struct SeqLeaf {
  bool is_var = false;
  IndTerm ind;
  std::string name;

  static SeqLeaf of(IndTerm t) { return {false, std::move(t), {}}; }
  static SeqLeaf seq_var(std::string a) { return {true, {}, std::move(a)}; }
  auto operator<=>(const SeqLeaf&) const = default;
};

// t_α ::= ε | t_x | α | t_α ∘ t_α
class SeqTerm {
 public:
  enum class Kind : std::uint8_t { Empty, Lift, Var, Concat };

  SeqTerm();
  static SeqTerm empty() { return SeqTerm(); }
  static SeqTerm lift(IndTerm t);
  static SeqTerm var(std::string name);
  static SeqTerm concat(SeqTerm a, SeqTerm b);
  static SeqTerm from_leaves(const std::vector<SeqLeaf>& leaves);
  static SeqTerm of_word(const Word& w);

  Kind kind() const { return node_->kind; }
  const IndTerm& ind() const { return node_->ind; }
  const std::string& name() const { return node_->name; }
  const SeqTerm& left() const { return *node_->left; }
  const SeqTerm& right() const { return *node_->right; }

  std::vector<SeqLeaf> leaves() const;
  SeqTerm normalized() const { return from_leaves(leaves()); }
  bool is_single_ind() const { return kind() == Kind::Lift; }

  bool operator==(const SeqTerm& o) const;

 private:
  struct Node {
    Kind kind = Kind::Empty;
    IndTerm ind;
    std::string name;
    std::shared_ptr<const SeqTerm> left, right;
  };
  explicit SeqTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  void collect(std::vector<SeqLeaf>& out) const;
  std::shared_ptr<const Node> node_;
};

enum class Op : std::uint8_t {
  IndEq,
  SeqEq,
  Not,
  And,
  Or,
  Implies,
  Emp,
  PointsTo,
  SepConj,
  Wand,
  ExistsProg,
  ExistsSeq,
  False,
  True,
  Macro,
};

struct FormulaNode;
struct MacroArg;

class Formula {
 public:
  Formula();
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}

  Op op() const;
  const FormulaNode& node() const { return node_ ? *node_ : true_node(); }
  const FormulaNode* ptr() const { return node_.get(); }

  // accessors, meaningful per op
  const IndTerm& lhs_ind() const;
  const IndTerm& rhs_ind() const;
  const IndTerm& loc() const { return lhs_ind(); }
  const SeqTerm& lhs_seq() const;
  const SeqTerm& rhs_seq() const;
  const SeqTerm& content() const { return lhs_seq(); }
  const Formula& a() const;
  const Formula& b() const;
  const Formula& body() const { return a(); }
  const std::string& var() const;
  const std::string& macro_name() const;
  const std::vector<MacroArg>& macro_args() const;

  bool operator==(const Formula& o) const;

 private:
  static const FormulaNode& true_node();
  std::shared_ptr<const FormulaNode> node_;
};

struct MacroArg {
  enum class Sort : std::uint8_t { Ind, Seq, Nat, Form };
  Sort sort = Sort::Nat;
  IndTerm ind;
  SeqTerm seq;
  std::uint64_t n = 0;
  Formula form;

  static MacroArg of_ind(IndTerm t) { MacroArg a; a.sort = Sort::Ind; a.ind = std::move(t); return a; }
  static MacroArg of_seq(SeqTerm t) { MacroArg a; a.sort = Sort::Seq; a.seq = std::move(t); return a; }
  static MacroArg of_nat(std::uint64_t v) { MacroArg a; a.sort = Sort::Nat; a.n = v; return a; }
  static MacroArg of_form(Formula f) { MacroArg a; a.sort = Sort::Form; a.form = std::move(f); return a; }
  bool operator==(const MacroArg& o) const;
};

struct FormulaNode {
  Op op = Op::True;
  IndTerm t1, t2;
  SeqTerm s1, s2;
  Formula a, b;
  std::string var;
  std::string macro;
  std::vector<MacroArg> args;
};

inline Op Formula::op() const { return node().op; }
inline const IndTerm& Formula::lhs_ind() const { return node().t1; }
inline const IndTerm& Formula::rhs_ind() const { return node().t2; }
inline const SeqTerm& Formula::lhs_seq() const { return node().s1; }
inline const SeqTerm& Formula::rhs_seq() const { return node().s2; }
inline const Formula& Formula::a() const { return node().a; }
inline const Formula& Formula::b() const { return node().b; }
inline const std::string& Formula::var() const { return node().var; }
inline const std::string& Formula::macro_name() const { return node().macro; }
inline const std::vector<MacroArg>& Formula::macro_args() const { return node().args; }

namespace mk {
Formula ind_eq(IndTerm a, IndTerm b);
Formula seq_eq(SeqTerm a, SeqTerm b);
Formula not_(Formula a);
Formula and_(Formula a, Formula b);
Formula or_(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula emp();
Formula points_to(IndTerm x, SeqTerm t);
Formula sep(Formula a, Formula b);
Formula wand(Formula a, Formula b);
Formula exists_prog(std::string x, Formula body);
Formula exists_seq(std::string a, Formula body);
Formula forall_prog(std::string x, Formula body);
Formula forall_seq(std::string a, Formula body);
Formula false_();
Formula true_();
Formula macro(std::string name, std::vector<MacroArg> args);

// Folds with the binary constructor; the empty list gives the unit.
Formula and_all(const std::vector<Formula>& fs);
Formula or_all(const std::vector<Formula>& fs);
Formula sep_all(const std::vector<Formula>& fs);

// ¬(t1 = t2)
Formula ind_ne(IndTerm a, IndTerm b);

// x ↪ t, x ⤳ ... style helpers used by the macro library
Formula hook(IndTerm x, SeqTerm t);
}  // namespace mk

// Concatenation helper: cat({a, b, c}) = a ∘ b ∘ c (left-nested).
SeqTerm cat(const std::vector<SeqTerm>& parts);
SeqTerm sv(const std::string& name);
SeqTerm lift_var(const std::string& name);
IndTerm iv(const std::string& name);
// nil^k
SeqTerm nil_block(std::size_t k);

std::string to_string(const IndTerm& t);
std::string to_string(const SeqTerm& t);
std::string to_string(const Formula& f);

}  // namespace seqsl
