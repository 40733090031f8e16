#include <gtest/gtest.h>

#include "gen.hpp"
#include "seqsl/analysis.hpp"
#include "seqsl/errors.hpp"
#include "seqsl/macros.hpp"
#include "seqsl/minsky.hpp"
#include "seqsl/parser.hpp"

using namespace seqsl;

namespace {

std::set<std::string> names_of(const std::vector<SeqTerm>& ts) {
  std::set<std::string> out;
  for (const auto& t : ts) out.insert(to_string(t));
  return out;
}

}  // namespace

TEST(Parse, Emp) { EXPECT_EQ(parse_formula("emp").op(), Op::Emp); }

TEST(Parse, PointsToConcat) {
  Formula f = parse_formula("x1 |-> @a ^ x3");
  ASSERT_EQ(f.op(), Op::PointsTo);
  EXPECT_EQ(f.loc(), IndTerm::var("x1"));
  EXPECT_EQ(f.content(), SeqTerm::concat(sv("a"), lift_var("x3")));
}

TEST(Parse, ForallIsNotExistsNot) {
  Formula f = parse_formula("forall @a. @a == @a");
  EXPECT_EQ(f, mk::not_(mk::exists_seq("a", mk::not_(mk::seq_eq(sv("a"), sv("a"))))));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(parse_formula("emp => emp => false"),
            mk::implies(mk::emp(), mk::implies(mk::emp(), mk::false_())));
  EXPECT_EQ(parse_formula("emp \\/ emp /\\ false"), mk::or_(mk::emp(), mk::and_(mk::emp(), mk::false_())));
  EXPECT_EQ(parse_formula("emp * emp -* false"), mk::wand(mk::sep(mk::emp(), mk::emp()), mk::false_()));
  EXPECT_EQ(parse_formula("~emp * emp"), mk::sep(mk::not_(mk::emp()), mk::emp()));
  EXPECT_EQ(parse_formula("exists x. x = nil /\\ emp"),
            mk::exists_prog("x", mk::and_(mk::ind_eq(iv("x"), IndTerm::nil()), mk::emp())));
}

TEST(Parse, Literals) {
  Formula f = parse_formula("@a == eps ^ nil ^ # ^ 7");
  EXPECT_EQ(f.rhs_seq().leaves(),
            (std::vector<SeqLeaf>{SeqLeaf::of(IndTerm::nil()), SeqLeaf::of(IndTerm::hash()),
                                  SeqLeaf::of(IndTerm::nat(7))}));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_formula("x |-> "), ParseError);
  EXPECT_THROW(parse_formula("emp emp"), ParseError);
  EXPECT_THROW(parse_formula("frobnicate(x)"), ParseError);
  EXPECT_THROW(parse_formula("alloc(x, @a)"), ParseError);
  try {
    parse_formula("emp /\\ )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
}

TEST(Parse, SeptractionAndHook) {
  EXPECT_EQ(expand_macros(parse_formula("emp -o emp")),
            mk::not_(mk::wand(mk::emp(), mk::not_(mk::emp()))));
  EXPECT_EQ(expand_macros(parse_formula("x ~> @a")), mk::sep(mk::points_to(iv("x"), sv("a")), mk::true_()));
}

TEST(Size, Table) {
  EXPECT_EQ(formula_size(parse_formula("emp")), 1u);
  EXPECT_EQ(formula_size(parse_formula("false")), 0u);
  EXPECT_EQ(formula_size(parse_formula("x |-> @a")), 1u);
  EXPECT_EQ(formula_size(parse_formula("@a == @b")), 0u);
  EXPECT_EQ(formula_size(parse_formula("x |-> @a * (y |-> @b -* false)")), 1u);
  EXPECT_EQ(formula_size(parse_formula("emp => x |-> @a * y |-> @a")), 2u);
  EXPECT_EQ(formula_size(parse_formula("emp -* x |-> @a * y |-> @a")), 2u);
}

TEST(Size, SumUnderStar) {
  gen::Rng r(11);
  gen::Vocab v;
  for (int i = 0; i < 200; ++i) {
    Formula a = gen::pseqsl(r, v, gen::pick(r, 4));
    Formula b = gen::pseqsl(r, v, gen::pick(r, 4));
    EXPECT_EQ(formula_size(mk::sep(a, b)), formula_size(a) + formula_size(b));
  }
}

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_prog_vars(parse_formula("x |-> @a ^ y")), (std::set<std::string>{"x", "y"}));
  EXPECT_TRUE(free_prog_vars(parse_formula("@a ^ nil == @b")).empty());
  EXPECT_EQ(free_prog_vars(parse_formula("exists x. x |-> y")), (std::set<std::string>{"y"}));
  EXPECT_EQ(free_seq_vars(parse_formula("exists @a. x |-> @a ^ @b")), (std::set<std::string>{"b"}));
  EXPECT_EQ(free_prog_vars(parse_formula("(exists x. x = x) /\\ x = y")), (std::set<std::string>{"x", "y"}));
}

TEST(FreeVars, MacroNamesStayBound) {
  for (const char* text : {"alloc(x)", "in(x, @a)", "outdeg(x, 2)", "reach(2, x, y)", "diff(@a)", "sapling(x, y)",
                           "lookup(x, @a, 2)", "two_tier(x, @a)", "trunc(@a, @b, 1, 2)", "reach_le(x, y, 2)"}) {
    Formula f = expand_macros(parse_formula(text));
    for (const auto& n : free_prog_vars(f)) EXPECT_TRUE(n == "x" || n == "y") << text << " leaks " << n;
    for (const auto& n : free_seq_vars(f)) EXPECT_TRUE(n == "a" || n == "b") << text << " leaks @" << n;
  }
}

TEST(SeqTerms, Examples) {
  EXPECT_TRUE(seq_terms(parse_formula("emp")).empty());
  EXPECT_EQ(names_of(seq_terms(parse_formula("x |-> @a ^ x3"))), (std::set<std::string>{"x", "@a ^ x3"}));
  EXPECT_EQ(names_of(seq_terms(parse_formula("@a1 == @a2 => false"))), (std::set<std::string>{"@a1", "@a2"}));
  EXPECT_EQ(seq_terms(parse_formula("x |-> @a /\\ y |-> (@a ^ eps)")).size(), 3u);
}

TEST(SeqTerm, NormalFormIsAssociative) {
  gen::Rng r(5);
  gen::Vocab v;
  for (int i = 0; i < 200; ++i) {
    SeqTerm a = gen::seq(r, v), b = gen::seq(r, v), c = gen::seq(r, v);
    EXPECT_EQ(SeqTerm::concat(a, SeqTerm::concat(b, c)).normalized(),
              SeqTerm::concat(SeqTerm::concat(a, b), c).normalized());
    EXPECT_EQ(SeqTerm::concat(a, SeqTerm::empty()).leaves(), a.leaves());
  }
}

TEST(RoundTrip, RandomFormulas) {
  gen::Rng r(1);
  gen::Vocab v;
  v.constants = true;
  for (int i = 0; i < 500; ++i) {
    Formula f = gen::pseqsl(r, v, gen::pick(r, 8));
    if (gen::coin(r, 3)) f = mk::exists_prog("x1", f);
    if (gen::coin(r, 3)) f = mk::forall_seq("a", f);
    if (gen::coin(r, 4)) f = mk::and_(f, mk::true_());
    std::string text = to_string(f);
    Formula g = parse_formula(text);
    EXPECT_EQ(g, f) << text;
    EXPECT_EQ(to_string(g), text);
  }
}

TEST(RoundTrip, Macros) {
  for (const char* text : {"alloc(x)", "ini(@a ^ nil)", "outdeg(x, 3)", "reach(2, x, y)", "(emp -o x |-> nil)",
                           "len_le(@a, 2) /\\ sapling(x, y)"}) {
    Formula f = parse_formula(text);
    EXPECT_EQ(parse_formula(to_string(f)), f) << text;
  }
}

TEST(Classify, QuantifierFreeIsSigma1) {
  gen::Rng r(3);
  gen::Vocab v;
  for (int i = 0; i < 200; ++i) {
    FragmentClass c = classify(gen::pseqsl(r, v, gen::pick(r, 7)));
    EXPECT_TRUE(c.quantifier_free);
    EXPECT_EQ(c.prog_blocks, 0);
    EXPECT_EQ(c.seq_blocks, 0);
    EXPECT_EQ(c.shape, Shape::Sigma1);
  }
}

TEST(Classify, Shapes) {
  EXPECT_EQ(classify(parse_formula("forall x. forall @a. x |-> @a => emp")).shape, Shape::Pi1);
  EXPECT_EQ(classify(parse_formula("exists x. exists @a. x |-> @a")).shape, Shape::Sigma1);
  FragmentClass c = classify(parse_formula("forall x. exists y. forall @a. x = y /\\ @a == @a"));
  EXPECT_EQ(c.shape, Shape::Other);
  EXPECT_EQ(c.prog_blocks, 2);
  EXPECT_EQ(c.seq_blocks, 1);
  EXPECT_THROW(classify(parse_formula("(exists x. x |-> nil) * emp")), FragmentError);
  EXPECT_EQ(classify(minsky::sapling(iv("x"), iv("y"))).shape, Shape::ForallExistsConj);
  minsky::Machine m{{minsky::inc(1, 2), minsky::test(1, 3, 2), minsky::halt()}};
  EXPECT_EQ(classify(minsky::encode(m)).shape, Shape::ForallExistsConj);
}

TEST(Prenex, RenamesClashingBinders) {
  Prenex p = prenex(parse_formula("(exists x. x = y) /\\ (exists x. x = nil)"));
  ASSERT_EQ(p.prefix.size(), 2u);
  EXPECT_NE(p.prefix[0].name, p.prefix[1].name);
  EXPECT_TRUE(is_quantifier_free(p.matrix));
  Prenex q = prenex(parse_formula("~(exists @a. @a == nil) => emp"));
  ASSERT_EQ(q.prefix.size(), 1u);
  EXPECT_FALSE(q.prefix[0].universal);
}

TEST(Macros, Definitions) {
  EXPECT_EQ(expand_macros(parse_formula("alloc_pseqsl(x)")),
            mk::wand(mk::points_to(iv("x"), SeqTerm::lift(IndTerm::nil())), mk::false_()));
  SeqTerm nil = SeqTerm::lift(IndTerm::nil());
  EXPECT_EQ(expand_macros(parse_formula("ini(@a)")),
            mk::seq_eq(SeqTerm::concat(nil, sv("a")), SeqTerm::concat(sv("a"), nil)));
  Formula in = expand_macros(parse_formula("in(x, @a)"));
  ASSERT_EQ(in.op(), Op::ExistsSeq);
  ASSERT_EQ(in.body().op(), Op::ExistsSeq);
  const Formula& eq = in.body().body();
  ASSERT_EQ(eq.op(), Op::SeqEq);
  EXPECT_EQ(eq.lhs_seq(), sv("a"));
  EXPECT_EQ(eq.rhs_seq().leaves(), (std::vector<SeqLeaf>{SeqLeaf::seq_var(in.var()), SeqLeaf::of(iv("x")),
                                                        SeqLeaf::seq_var(in.body().var())}));
  EXPECT_FALSE(has_macros(expand_macros(parse_formula("sapling(x, y) /\\ reach_le(x, y, 3)"))));
}

TEST(Macros, Errors) {
  EXPECT_THROW(expand_macros(mk::macro("nope", {})), MacroError);
  EXPECT_THROW(expand_macros(mk::macro("alloc", {MacroArg::of_nat(1)})), MacroError);
  EXPECT_THROW(expand_macros(mk::macro("alloc", {})), MacroError);
}

TEST(Fragment, PSeqSLMembership) {
  EXPECT_TRUE(is_pseqsl(parse_formula("(x |-> nil) -* false")));
  EXPECT_TRUE(is_pseqsl(parse_formula("~(@a == @a) \\/ emp /\\ true")));
  EXPECT_FALSE(is_pseqsl(parse_formula("exists x. emp")));
  EXPECT_FALSE(is_pseqsl(parse_formula("x |-> 3")));
  EXPECT_TRUE(is_pseqsl(parse_formula("x |-> 3"), nullptr, true));
  EXPECT_THROW(require_pseqsl(parse_formula("exists @a. emp")), FragmentError);
}
