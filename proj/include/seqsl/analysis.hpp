#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "seqsl/formula.hpp"

namespace seqsl {

// Expands macros and rewrites ~, /\, \/ and true through => and false.
Formula desugar(const Formula& f);

// sz of a quantifier-free formula, computed on its desugared form.
std::size_t formula_size(const Formula& f);

std::set<std::string> free_prog_vars(const Formula& f);
std::set<std::string> free_seq_vars(const Formula& f);
// Every variable name occurring anywhere, bound or free, both sorts.
std::set<std::string> all_names(const Formula& f);

// Deduplicated by flat normal form, in order of first occurrence.
std::vector<SeqTerm> seq_terms(const Formula& f);

bool is_quantifier_free(const Formula& f);

// Membership in the propositional fragment after desugaring. With
// allow_constants, natural constants may appear as individual terms.
bool is_pseqsl(const Formula& f, std::string* why = nullptr, bool allow_constants = false);
void require_pseqsl(const Formula& f, bool allow_constants = false);

Formula rename_prog(const Formula& f, const std::string& from, const std::string& to);
Formula rename_seq(const Formula& f, const std::string& from, const std::string& to);

struct Binder {
  bool universal = false;
  bool seq = false;
  std::string name;
  bool operator==(const Binder&) const = default;
};

struct Prenex {
  std::vector<Binder> prefix;
  Formula matrix;
};

// Hoists quantifiers across ~, /\, \/ and =>, renaming clashing binders.
// Throws FragmentError when a quantifier sits under * or -*.
Prenex prenex(const Formula& f);
Formula close_prefix(const std::vector<Binder>& prefix, const Formula& matrix);

enum class Shape { Sigma1, Pi1, ForallExistsConj, Other };

struct FragmentClass {
  bool quantifier_free = true;
  int prog_blocks = 0;
  int seq_blocks = 0;
  Shape shape = Shape::Sigma1;
};

FragmentClass classify(const Formula& f);
std::string shape_name(Shape s);

}  // namespace seqsl
