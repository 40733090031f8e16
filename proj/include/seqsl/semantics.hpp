#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqsl/formula.hpp"
#include "seqsl/model.hpp"

namespace seqsl {

struct CheckConfig {
  // Size of the fresh location block B used for -*; defaults to max(sz(a), sz(b)).
  std::optional<std::size_t> loc_universe_extra;
  std::size_t seq_len_bound = 4;
  std::size_t alphabet_extra = 1;
  bool trace = false;
};

enum class Truth { False, True, Unknown };

struct Verdict3 {
  Truth truth = Truth::False;
  std::string reason;
  std::vector<std::string> trace;
};

std::string truth_name(Truth t);

// Compiles a formula once so it can be checked against many models.
class Checker {
 public:
  explicit Checker(const Formula& f, CheckConfig cfg = {});
  ~Checker();
  Checker(Checker&&) noexcept;
  Checker& operator=(Checker&&) noexcept;

  Verdict3 check(const Model& m) const;

 private:
  struct Program;
  std::unique_ptr<Program> prog_;
  CheckConfig cfg_;
};

Verdict3 check(const Model& m, const Formula& f, const CheckConfig& cfg = {});
// Same as check; the macro call is expanded first.
Verdict3 check_derived(const Model& m, const Formula& macro_call, const CheckConfig& cfg = {});

}  // namespace seqsl
