#pragma once

#include <string>
#include <vector>

#include "seqsl/formula.hpp"

namespace seqsl {

// Argument sorts of a library macro, or nullptr for an unknown name.
const std::vector<MacroArg::Sort>* macro_signature(const std::string& name);
std::vector<std::string> macro_names();

// Replaces every macro call by its definition. Bound names introduced by the
// expansion are <base>_<k> with k drawn from one counter per call, skipping
// any name that already occurs in the input.
Formula expand_macros(const Formula& f);
bool has_macros(const Formula& f);

// The four conjuncts of sapling(x0, x0p), already expanded.
std::vector<Formula> sapling_parts(const IndTerm& x0, const IndTerm& x0p);

namespace lib {
Formula call(const std::string& name, std::vector<MacroArg> args);
Formula hook(IndTerm x, SeqTerm t);
Formula septraction(Formula a, Formula b);
Formula alloc(IndTerm x);
Formula alloc_pseqsl(IndTerm x);
Formula in(IndTerm x, SeqTerm t);
Formula len_eq(SeqTerm t, std::uint64_t n);
Formula len_le(SeqTerm t, std::uint64_t n);
Formula len_ge(SeqTerm t, std::uint64_t n);
Formula lookup(IndTerm x, SeqTerm t, std::uint64_t i);
Formula outdeg(IndTerm x, std::uint64_t n);
Formula edge(IndTerm x1, IndTerm x2);
Formula reach(std::uint64_t n, IndTerm x1, IndTerm x2);
Formula ini(SeqTerm t);
}  // namespace lib

}  // namespace seqsl
