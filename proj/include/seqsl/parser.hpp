#pragma once

#include <string>

#include "seqsl/formula.hpp"

namespace seqsl {

// Concrete syntax, loosest to tightest:
//   =>  (right)   \/   /\   -* -o (right)   *   ~   atoms
// Quantifier bodies extend as far right as possible.
Formula parse_formula(const std::string& text);
SeqTerm parse_seq_term(const std::string& text);

}  // namespace seqsl
