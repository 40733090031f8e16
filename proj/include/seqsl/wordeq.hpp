#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seqsl/value.hpp"

namespace seqsl {

// A symbol of a word term: a letter or a sequence variable (name without '@').
struct WSym {
  bool is_var = false;
  Value letter;
  std::string var;
  static WSym let(Value v) { return {false, v, {}}; }
  static WSym of_var(std::string name) { return {true, Value(), std::move(name)}; }
  auto operator<=>(const WSym&) const = default;
};

using WordTerm = std::vector<WSym>;
using Substitution = std::map<std::string, Word>;
using Alphabet = std::vector<Value>;

class WordFormula {
 public:
  enum class Kind : std::uint8_t { Eq, Not, And, Or, True, False, Exists };

  WordFormula();
  static WordFormula eq(WordTerm l, WordTerm r);
  static WordFormula not_(WordFormula a);
  static WordFormula and_(std::vector<WordFormula> kids);
  static WordFormula or_(std::vector<WordFormula> kids);
  static WordFormula true_();
  static WordFormula false_();
  static WordFormula exists(std::string var, WordFormula body);

  Kind kind() const;
  const WordTerm& lhs() const;
  const WordTerm& rhs() const;
  const std::vector<WordFormula>& kids() const;
  const WordFormula& body() const { return kids()[0]; }
  const std::string& var() const;
  bool operator==(const WordFormula& o) const;

 private:
  struct Node;
  explicit WordFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node& node() const;
  std::shared_ptr<const Node> node_;
};

// Simplifying constructors: ground equations fold to true/false, common
// ends are stripped, and/or flatten and absorb units.
namespace wf {
WordFormula eq(WordTerm l, WordTerm r);
WordFormula ne(WordTerm l, WordTerm r);
WordFormula not_(WordFormula a);
WordFormula and_(std::vector<WordFormula> kids);
WordFormula or_(std::vector<WordFormula> kids);
}  // namespace wf

WordTerm parse_word_term(const std::string& text);
WordFormula parse_word_formula(const std::string& text);
std::string to_string(const WordTerm& t);
std::string to_string(const WordFormula& f);

// Every variable, bound or free.
std::set<std::string> word_vars(const WordFormula& f);
// Letters occurring in f, in Value order.
Alphabet letters_of(const WordFormula& f);
std::size_t formula_nodes(const WordFormula& f);

Word apply(const WordTerm& t, const Substitution& s);
// Ground evaluation; bound variables are read from s like free ones.
bool verify_substitution(const WordFormula& f, const Substitution& s);

enum class WeStatus { Sat, Unsat, Unknown };
std::string status_name(WeStatus s);

struct SolverVerdict {
  WeStatus status = WeStatus::Unknown;
  Substitution witness;
  std::string reason;
};

struct SolveConfig {
  std::size_t max_len = 16;
  std::size_t max_nodes = 200000;
  // Defaults to the letters of the formula plus one fresh natural.
  std::optional<Alphabet> alphabet;
};

// Existentially bound variables are solved for like free ones.
SolverVerdict solve(const WordFormula& f, const SolveConfig& cfg = {});
// Lexicographically least witness over (variables by name, words by length
// then letters); Unknown when a formula with variables has none within max_len.
SolverVerdict brute_force_solve(const WordFormula& f, std::size_t max_len, const Alphabet& sigma);

struct SingleEquation {
  std::vector<std::string> prefix;
  WordTerm lhs, rhs;
};

// Turns a quantifier-free Boolean combination into one equation under an
// existential prefix. The first two letters of sigma play n and n'.
SingleEquation to_single_equation(const WordFormula& f, const Alphabet& sigma);
// Extends a solution of f to the variables the transform introduces, so the
// result satisfies to_single_equation(f, sigma). Empty when s does not satisfy f.
std::optional<Substitution> lift_solution(const WordFormula& f, const Alphabet& sigma, const Substitution& s);
// Symbol counts of both sides without building them.
std::pair<std::uint64_t, std::uint64_t> single_equation_size(const WordFormula& f, const Alphabet& sigma);

// Checks the lifted solution on a shared representation of both sides, so
// sizes far beyond what to_single_equation can print stay cheap. Equality is
// decided by length and a 61-bit polynomial hash.
bool lifted_solution_holds(const WordFormula& f, const Alphabet& sigma, const Substitution& s);

WordFormula as_formula(const SingleEquation& e);
std::string to_string(const SingleEquation& e);

}  // namespace seqsl
