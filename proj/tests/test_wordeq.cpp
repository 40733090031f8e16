#include <gtest/gtest.h>

#include "gen.hpp"
#include "seqsl/wordeq.hpp"

using namespace seqsl;

namespace {

const Value A = Value::nat(1);
const Value B = Value::nat(2);
const Alphabet kAB{A, B};

WordFormula wfp(const std::string& s) { return parse_word_formula(s); }

// Every substitution of `vars` by words of length <= max_len over sigma that satisfies f.
std::vector<Substitution> all_solutions(const WordFormula& f, const std::vector<std::string>& vars,
                                        const Alphabet& sigma, std::size_t max_len) {
  std::vector<Word> words = gen::all_words(sigma, max_len);
  std::vector<Substitution> out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = words[idx[i]];
    if (verify_substitution(f, s)) out.push_back(s);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == words.size()) idx[i++] = 0;
    if (i == idx.size()) return out;
  }
}

std::vector<std::string> free_vars(const WordFormula& f) {
  auto vs = word_vars(f);
  return {vs.begin(), vs.end()};
}

}  // namespace

TEST(Syntax, RoundTrip) {
  for (const char* s : {"@a == 1 ^ 2", "@a != nil", "~(@a == @b) | @a ^ # == eps", "(@a == 1 | @b == 2) & 1 == 1"}) {
    WordFormula f = wfp(s);
    EXPECT_EQ(wfp(to_string(f)), f) << s;
  }
  EXPECT_EQ(parse_word_term("@a ^ 3 ^ nil"),
            (WordTerm{WSym::of_var("a"), WSym::let(Value::nat(3)), WSym::let(Value::nil())}));
  EXPECT_THROW(wfp("@a == "), std::exception);
  EXPECT_EQ(letters_of(wfp("@a ^ 3 == nil ^ 1")), (Alphabet{Value::nat(1), Value::nat(3), Value::nil()}));
}

TEST(Verify, Examples) {
  EXPECT_TRUE(verify_substitution(wfp("@a == 1 ^ 2"), {{"a", {A, B}}}));
  EXPECT_FALSE(verify_substitution(wfp("~(@a == 1)"), {{"a", {A}}}));
  EXPECT_EQ(apply(parse_word_term("@a ^ 2 ^ @a"), {{"a", {A}}}), (Word{A, B, A}));
}

TEST(Solve, Examples) {
  SolverVerdict v = solve(wfp("@a == 1 ^ 2"));
  ASSERT_EQ(v.status, WeStatus::Sat);
  EXPECT_EQ(v.witness.at("a"), (Word{A, B}));
  SolveConfig cfg;
  cfg.alphabet = kAB;
  EXPECT_EQ(solve(wfp("@a ^ 2 == 1 ^ @a"), cfg).status, WeStatus::Unsat);
  EXPECT_EQ(brute_force_solve(wfp("@a ^ 2 == 1 ^ @a"), 4, kAB).status, WeStatus::Unknown);
  v = solve(wfp("@a1 ^ @a2 == 1 ^ 2"));
  ASSERT_EQ(v.status, WeStatus::Sat);
  EXPECT_TRUE(verify_substitution(wfp("@a1 ^ @a2 == 1 ^ 2"), v.witness));
  EXPECT_EQ(all_solutions(wfp("@a1 ^ @a2 == 1 ^ 2"), {"a1", "a2"}, kAB, 2).size(), 3u);
  EXPECT_EQ(solve(wfp("~(@a == @a)")).status, WeStatus::Unsat);
  EXPECT_EQ(solve(wfp("@a ^ 1 == 1 ^ @a & @a != eps & @a != 1")).status, WeStatus::Sat);
}

TEST(Brute, Examples) {
  SolverVerdict v = brute_force_solve(wfp("@a == @a"), 3, kAB);
  ASSERT_EQ(v.status, WeStatus::Sat);
  EXPECT_TRUE(v.witness.at("a").empty());
  EXPECT_EQ(brute_force_solve(wfp("1 == 2"), 0, kAB).status, WeStatus::Unsat);
  EXPECT_EQ(brute_force_solve(wfp("1 == 2"), 5, kAB).status, WeStatus::Unsat);
  EXPECT_EQ(brute_force_solve(wfp("~(@a == @a)"), 3, kAB).status, WeStatus::Unknown);
  v = brute_force_solve(wfp("@b ^ @a == 2 ^ 1"), 2, kAB);
  ASSERT_EQ(v.status, WeStatus::Sat);
  EXPECT_EQ(v.witness.at("a"), Word{});
  EXPECT_EQ(v.witness.at("b"), (Word{B, A}));
}

TEST(Transform, SingleEquationIsItself) {
  SingleEquation e = to_single_equation(wfp("@a ^ @b == 1 ^ 2"), kAB);
  EXPECT_TRUE(e.prefix.empty());
  EXPECT_EQ(to_string(e), "@a ^ @b == 1 ^ 2");
}

TEST(Transform, Conjunction) {
  SingleEquation e = to_single_equation(wfp("@a == 1 & @b == 2"), kAB);
  EXPECT_TRUE(e.prefix.empty());
  // t n t' t n' t' for each side, with n, n' the first two letters
  EXPECT_EQ(to_string(e), "@a ^ 1 ^ @b ^ @a ^ 2 ^ @b == 1 ^ 1 ^ 2 ^ 1 ^ 2 ^ 2");
  EXPECT_EQ(single_equation_size(wfp("@a == 1 & @b == 2"), kAB), std::make_pair(std::uint64_t{6}, std::uint64_t{6}));
}

TEST(Transform, NegatedAtom) {
  WordFormula f = wfp("~(@a == 1)");
  SolverVerdict src = brute_force_solve(f, 3, kAB);
  ASSERT_EQ(src.status, WeStatus::Sat);
  SingleEquation e = to_single_equation(f, kAB);
  EXPECT_FALSE(e.prefix.empty());
  auto lifted = lift_solution(f, kAB, {{"a", {B}}});
  ASSERT_TRUE(lifted);
  EXPECT_TRUE(verify_substitution(as_formula(e), *lifted));
  EXPECT_TRUE(lifted_solution_holds(f, kAB, {{"a", {B}}}));
  EXPECT_FALSE(lift_solution(f, kAB, {{"a", {A}}}));
  // Unsatisfiable instance of the same shape: every lift fails at the source.
  for (const Word& w : gen::all_words(kAB, 3))
    EXPECT_EQ(lift_solution(wfp("~(@a == @a)"), kAB, {{"a", w}}).has_value(), false);
}

TEST(Transform, SmallInstancesEquisatisfiable) {
  gen::Rng r(31);
  std::size_t compared = 0;
  for (int i = 0; i < 400 && compared < 40; ++i) {
    WordFormula f = gen::word_formula(r, 1 + gen::pick(r, 2), {"a", "b"}, kAB);
    auto [l, rsz] = single_equation_size(f, kAB);
    if (l + rsz > 60) continue;
    SingleEquation e = to_single_equation(f, kAB);
    WordFormula g = as_formula(e);
    if (e.prefix.size() > 2) continue;
    ++compared;
    SolverVerdict src = brute_force_solve(f, 3, kAB);
    SolverVerdict dst = brute_force_solve(g, 6, kAB);
    EXPECT_EQ(src.status == WeStatus::Sat, dst.status == WeStatus::Sat) << to_string(f);
    if (src.status == WeStatus::Sat) EXPECT_TRUE(lifted_solution_holds(f, kAB, src.witness)) << to_string(f);
  }
  EXPECT_GE(compared, 20u);
}

TEST(Transform, LiftingIsSound) {
  gen::Rng r(32);
  for (int i = 0; i < 200; ++i) {
    WordFormula f = gen::word_formula(r, 1 + gen::pick(r, 3), {"a", "b"}, kAB);
    SolverVerdict v = brute_force_solve(f, 4, kAB);
    if (v.status != WeStatus::Sat) continue;
    EXPECT_TRUE(lifted_solution_holds(f, kAB, v.witness)) << to_string(f);
  }
}

TEST(Transform, NeedsTwoLetters) { EXPECT_THROW(to_single_equation(wfp("@a == 1"), {A}), std::exception); }

TEST(Properties, SolverSoundAndAgreesWithOracle) {
  gen::Rng r(33);
  SolveConfig cfg;
  cfg.alphabet = kAB;
  std::size_t decided = 0;
  for (int i = 0; i < 200; ++i) {
    WordFormula f = gen::word_formula(r, 1 + gen::pick(r, 3), {"a", "b"}, kAB);
    SolverVerdict s = solve(f, cfg);
    SolverVerdict o = brute_force_solve(f, 4, kAB);
    if (s.status == WeStatus::Sat) EXPECT_TRUE(verify_substitution(f, s.witness)) << to_string(f);
    if (o.status == WeStatus::Sat) {
      EXPECT_TRUE(verify_substitution(f, o.witness));
      EXPECT_NE(s.status, WeStatus::Unsat) << to_string(f);
    }
    if (s.status == WeStatus::Unsat) EXPECT_NE(o.status, WeStatus::Sat) << to_string(f);
    if (s.status != WeStatus::Unknown) ++decided;
  }
  EXPECT_GE(decided, 190u);
}

TEST(Properties, GroundFormulasAreExact) {
  gen::Rng r(34);
  for (int i = 0; i < 200; ++i) {
    WordFormula f = gen::word_formula(r, 1 + gen::pick(r, 3), {}, kAB);
    bool holds = verify_substitution(f, {});
    WeStatus want = holds ? WeStatus::Sat : WeStatus::Unsat;
    EXPECT_EQ(solve(f).status, want) << to_string(f);
    EXPECT_EQ(brute_force_solve(f, 2, kAB).status, want) << to_string(f);
  }
}

TEST(Properties, BruteForceFindsLeastWitness) {
  gen::Rng r(35);
  for (int i = 0; i < 100; ++i) {
    WordFormula f = gen::word_formula(r, 1 + gen::pick(r, 2), {"a"}, kAB);
    auto sols = all_solutions(f, free_vars(f), kAB, 3);
    SolverVerdict v = brute_force_solve(f, 3, kAB);
    if (sols.empty()) {
      EXPECT_NE(v.status, WeStatus::Sat);
      continue;
    }
    ASSERT_EQ(v.status, WeStatus::Sat) << to_string(f);
    if (!free_vars(f).empty()) EXPECT_EQ(v.witness, sols.front()) << to_string(f);
  }
}
