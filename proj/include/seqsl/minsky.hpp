#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqsl/formula.hpp"
#include "seqsl/model.hpp"
#include "seqsl/semantics.hpp"

namespace seqsl::minsky {

class MachineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instruction {
  enum class Kind : std::uint8_t { Inc, Test, Halt };
  Kind kind = Kind::Halt;
  int counter = 1;                   // 1 or 2
  std::size_t next = 0;              // Inc target
  std::size_t on_zero = 0, on_dec = 0;  // Test targets
};

// Instruction i (1-based) is instructions[i - 1]; the last one is the only Halt.
struct Machine {
  std::vector<Instruction> instructions;
  std::size_t n() const { return instructions.size(); }
  const Instruction& at(std::size_t i) const { return instructions.at(i - 1); }
};

Instruction inc(int counter, std::size_t next);
Instruction test(int counter, std::size_t on_zero, std::size_t on_dec);
Instruction halt();

void validate_machine(const Machine& m);
Machine parse_machine(const std::string& text);
Machine load_machine(const std::string& path);
std::string to_string(const Machine& m);

struct State {
  std::size_t pointer = 1;
  std::uint64_t c1 = 0, c2 = 0;
  bool operator==(const State&) const = default;
};

struct Run {
  std::vector<State> states;
  bool halted = false;  // false: cut at max_steps
  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

Run simulate(const Machine& m, std::size_t max_steps);
std::string to_string(const State& s);

// Psi1 /\ Psi2 /\ Psi3 /\ Psi4 with fresh bound names.
Formula sapling(const IndTerm& x0, const IndTerm& x0p);

struct EncodeOptions {
  // forall.Phi1' /\ forall exists.(Phi2' /\ Phi3') instead of three conjuncts.
  bool regrouped = false;
};

// Free variables: x0 (the first master location).
Formula encode(const Machine& m, const EncodeOptions& opt = {});

// Names the run model binds on its stack.
inline constexpr const char* kFirst = "x0";
inline constexpr const char* kLast = "x0p";

// Master chain at locations 1..4(m+1). Throws std::invalid_argument on a run
// that did not halt.
Model build_run_model(const Run& run);

// Paddings (lengths of the nil blocks) per cell of a chain model.
Model chain_model(const std::vector<std::size_t>& paddings);

// Adds a cycle of `length` cells at locations above everything in m.
Model inject_circle(const Model& m, std::size_t length);
// Drops every cell whose first-element pointer path returns to itself.
Model remove_circles(const Model& m);

// Sequences explored up to the longest cell of m.
CheckConfig check_config(const Model& m);

struct Validation {
  Run run;
  Truth truth = Truth::Unknown;  // of encode(M) on the run model; Unknown if the run did not halt
  std::string reason;
};

Validation validate(const Machine& m, std::size_t max_steps, const EncodeOptions& opt = {});

struct Refutation {
  std::size_t models = 0;
  std::size_t satisfying = 0;
  std::size_t unknown = 0;
};

// Checks encode(M) on every chain model with 1..max_periods periods whose
// pointer and counter cells carry 1..max_padding nils.
Refutation refute_chains(const Machine& m, std::size_t max_periods, std::size_t max_padding,
                         const EncodeOptions& opt = {});

}  // namespace seqsl::minsky
