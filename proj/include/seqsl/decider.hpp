#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>

#include "seqsl/formula.hpp"
#include "seqsl/model.hpp"
#include "seqsl/wordeq.hpp"

namespace seqsl {

struct DecideConfig {
  SolveConfig solve;
  // Work units (reduction calls plus -* branches) before giving up with Unknown.
  std::size_t max_nodes = 2'000'000;
};

enum class SatStatus { Sat, Unsat, Unknown };
std::string sat_status_name(SatStatus s);

struct SatVerdict {
  SatStatus status = SatStatus::Unknown;
  Model witness;
  std::string reason;
};

enum class Validity { Valid, Invalid, Unknown };
std::string validity_name(Validity v);

struct ValidityVerdict {
  Validity status = Validity::Unknown;
  std::optional<Model> countermodel;
  std::string reason;
};

// The word formula T(s, h, phi) conjoined with the freshness disequalities of
// the extra sequence variable. Throws FragmentError outside the propositional
// fragment and UnboundVariable when s misses a free program variable.
WordFormula reduce(const Stack& s, const SymbolicHeap& h, const Formula& phi, const DecideConfig& cfg = {});

// Name of the fresh variable reduce introduces for phi.
std::string beta_bar_name(const Formula& phi);

// Letters of the instance plus one fresh natural per sequence variable.
Alphabet reduction_alphabet(const Stack& s, const GroundHeap& h, const WordFormula& reduced);

SatVerdict decide_given_stack_heap(const Stack& s, const GroundHeap& h, const Formula& phi,
                                   const DecideConfig& cfg = {});
SatVerdict decide_given_stack(const Stack& s, const Formula& phi, const DecideConfig& cfg = {});

// Program variables in nat_only range over locations only; the rest also
// over nil and #.
SatVerdict decide_sat(const Formula& phi, const DecideConfig& cfg = {}, const std::set<std::string>& nat_only = {});

// phi must be universally quantified over a quantifier-free propositional matrix.
ValidityVerdict decide_pi1_validity(const Formula& phi, const DecideConfig& cfg = {});

}  // namespace seqsl
