#include <gtest/gtest.h>

#include "gen.hpp"
#include "seqsl/analysis.hpp"
#include "seqsl/errors.hpp"
#include "seqsl/macros.hpp"
#include "seqsl/parser.hpp"
#include "seqsl/semantics.hpp"

using namespace seqsl;

namespace {

const Value nil = Value::nil();
const Value hash = Value::hash();
Value n(std::uint64_t v) { return Value::nat(v); }

Truth truth(const Model& m, const std::string& text, CheckConfig cfg = {}) {
  return check(m, parse_formula(text), cfg).truth;
}

// Direct reading of the satisfaction relation. -* ranges over every heap whose
// domain lies in `universe` and whose cells hold a word from `contents`.
struct Oracle {
  std::vector<std::uint64_t> universe;
  std::vector<Word> contents;

  bool eval(const Model& m, const Formula& f) const {
    switch (f.op()) {
      case Op::True:
        return true;
      case Op::False:
        return false;
      case Op::IndEq:
        return eval_ind_term(m, f.lhs_ind()) == eval_ind_term(m, f.rhs_ind());
      case Op::SeqEq:
        return eval_seq_term(m, f.lhs_seq()) == eval_seq_term(m, f.rhs_seq());
      case Op::Not:
        return !eval(m, f.a());
      case Op::And:
        return eval(m, f.a()) && eval(m, f.b());
      case Op::Or:
        return eval(m, f.a()) || eval(m, f.b());
      case Op::Implies:
        return !eval(m, f.a()) || eval(m, f.b());
      case Op::Emp:
        return m.heap.empty();
      case Op::PointsTo: {
        Value x = eval_ind_term(m, f.loc());
        return x.is_nat() && m.heap.size() == 1 && m.heap.begin()->first == x.nat_value() &&
               m.heap.begin()->second == eval_seq_term(m, f.content());
      }
      case Op::SepConj: {
        std::vector<std::uint64_t> dom;
        for (const auto& [l, w] : m.heap) dom.push_back(l);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dom.size()); ++mask) {
          Model left = m, right = m;
          left.heap.clear();
          right.heap.clear();
          for (std::size_t i = 0; i < dom.size(); ++i)
            ((mask >> i) & 1 ? left : right).heap[dom[i]] = m.heap.at(dom[i]);
          if (eval(left, f.a()) && eval(right, f.b())) return true;
        }
        return false;
      }
      case Op::Wand: {
        std::vector<std::uint64_t> free;
        for (auto l : universe)
          if (!m.heap.count(l)) free.push_back(l);
        // choice[i] == 0 leaves free[i] unallocated, k > 0 stores contents[k - 1]
        std::vector<std::size_t> choice(free.size(), 0);
        while (true) {
          Model ext = m, ext_only = m;
          ext_only.heap.clear();
          for (std::size_t i = 0; i < free.size(); ++i)
            if (choice[i]) ext_only.heap[free[i]] = contents[choice[i] - 1];
          for (const auto& c : ext_only.heap) ext.heap.insert(c);
          if (eval(ext_only, f.a()) && !eval(ext, f.b())) return false;
          std::size_t i = 0;
          while (i < choice.size() && ++choice[i] > contents.size()) choice[i++] = 0;
          if (i == choice.size()) return true;
        }
      }
      default:
        throw std::logic_error("oracle: unsupported operator");
    }
  }
};

const std::vector<Value> kLetters{n(1), n(2), nil};

Model random_model(gen::Rng& r, std::size_t max_cells, std::size_t content_len) {
  Model m;
  const std::vector<Value> stack_values{n(1), n(2), n(3), nil};
  for (const char* x : {"x1", "x2", "x3"}) m.stack[x] = stack_values[gen::pick(r, stack_values.size())];
  for (const char* a : {"a", "b"}) m.seq[a] = gen::word(r, kLetters, 1);
  std::size_t cells = gen::pick(r, max_cells + 1);
  for (std::size_t i = 0; i < cells; ++i) m.heap[1 + gen::pick(r, 3)] = gen::word(r, kLetters, content_len);
  return m;
}

std::size_t wands(const Formula& f) {
  switch (f.op()) {
    case Op::Wand:
      return 1 + wands(f.a()) + wands(f.b());
    case Op::Not:
      return wands(f.a());
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::SepConj:
      return wands(f.a()) + wands(f.b());
    default:
      return 0;
  }
}

}  // namespace

TEST(Check, Examples) {
  Model empty;
  EXPECT_EQ(truth(empty, "emp"), Truth::True);
  EXPECT_EQ(truth(empty, "emp -* emp"), Truth::True);
  Model ex1;
  ex1.stack = {{"x1", n(1)}, {"x3", n(3)}};
  ex1.seq = {{"a1", {n(1)}}};
  ex1.heap = {{1, {n(1), n(3)}}};
  EXPECT_EQ(truth(ex1, "x1 |-> @a1 ^ x3"), Truth::True);
  ex1.seq["a1"] = {n(3)};
  EXPECT_EQ(truth(ex1, "x1 |-> @a1 ^ x3"), Truth::False);
  EXPECT_EQ(truth(ex1, "emp"), Truth::False);
}

TEST(Check, Atoms) {
  Model m;
  m.stack = {{"x", n(1)}, {"y", nil}, {"z", hash}};
  m.heap = {{1, {nil}}};
  EXPECT_EQ(truth(m, "x = 1"), Truth::True);
  EXPECT_EQ(truth(m, "y = nil"), Truth::True);
  EXPECT_EQ(truth(m, "y = z"), Truth::False);
  EXPECT_EQ(truth(m, "x |-> nil"), Truth::True);
  EXPECT_EQ(truth(m, "y |-> nil"), Truth::False);
  EXPECT_EQ(truth(m, "x |-> nil * emp"), Truth::True);
  EXPECT_EQ(truth(m, "x |-> nil * x |-> nil"), Truth::False);
  EXPECT_EQ(truth(m, "(x |-> nil) -* false"), Truth::True);
  EXPECT_EQ(truth(m, "(x |-> nil) -o true"), Truth::False);
}

TEST(Check, Unbound) {
  Model m;
  EXPECT_THROW(check(m, parse_formula("x = nil")), UnboundVariable);
  EXPECT_THROW(check(m, parse_formula("@a == eps")), UnboundVariable);
  m.stack["x"] = n(1);
  EXPECT_EQ(truth(m, "x |-> @a"), Truth::False);
}

TEST(Check, Quantifiers) {
  Model m;
  m.stack = {{"x", n(1)}};
  m.heap = {{1, {n(2), nil}}, {2, {}}};
  EXPECT_EQ(truth(m, "exists y. exists @a. x |-> y ^ @a * y |-> eps"), Truth::True);
  EXPECT_EQ(truth(m, "exists y. y = nil"), Truth::False);
  EXPECT_EQ(truth(m, "forall y. ~(y = nil)"), Truth::True);
  EXPECT_EQ(truth(m, "exists @a. x |-> @a * true"), Truth::True);
  EXPECT_NE(truth(m, "forall @a. @a ^ nil == nil ^ @a => ini(@a)"), Truth::False);
  EXPECT_EQ(truth(m, "exists @a. @a ^ 1 == 1 ^ @a /\\ ~(@a == eps)"), Truth::True);
}

TEST(Derived, Examples) {
  Model m;
  m.stack = {{"x", n(1)}, {"y", n(2)}};
  m.heap = {{1, {n(2), hash, n(5)}}};
  EXPECT_EQ(check_derived(m, parse_formula("outdeg(x, 1)")).truth, Truth::True);
  EXPECT_EQ(check_derived(m, parse_formula("outdeg(x, 2)")).truth, Truth::False);
  EXPECT_EQ(check_derived(m, parse_formula("reach(0, x, x)")).truth, Truth::True);
  Model chain;
  chain.stack = {{"x", n(1)}, {"y", n(2)}};
  chain.heap = {{1, {n(2), hash}}, {2, {hash}}};
  EXPECT_EQ(check_derived(chain, parse_formula("reach(1, x, y)")).truth, Truth::True);
  EXPECT_EQ(check_derived(chain, parse_formula("reach(1, y, x)")).truth, Truth::False);
  EXPECT_EQ(check_derived(chain, parse_formula("reach(0, x, y)")).truth, Truth::False);
  EXPECT_EQ(check_derived(chain, parse_formula("alloc(x)")).truth, Truth::True);
}

TEST(Properties, SeptractionDuality) {
  gen::Rng r(21);
  gen::Vocab v;
  for (int i = 0; i < 300; ++i) {
    Model m = random_model(r, 2, 2);
    Formula a = gen::pseqsl(r, v, gen::pick(r, 3)), b = gen::pseqsl(r, v, gen::pick(r, 3));
    Truth sept = check(m, expand_macros(mk::macro("septraction", {MacroArg::of_form(a), MacroArg::of_form(b)}))).truth;
    Truth dual = check(m, mk::not_(mk::wand(a, mk::not_(b)))).truth;
    EXPECT_EQ(sept, dual) << to_string(a) << " / " << to_string(b);
  }
}

TEST(Properties, StarMatchesSplitOracle) {
  gen::Rng r(22);
  gen::Vocab v;
  Oracle oracle;
  for (int i = 0; i < 300; ++i) {
    Model m = random_model(r, 3, 2);
    Formula f = mk::sep(gen::pseqsl(r, v, gen::pick(r, 4), false), gen::pseqsl(r, v, gen::pick(r, 4), false));
    Truth t = check(m, f).truth;
    ASSERT_NE(t, Truth::Unknown) << to_string(f);
    EXPECT_EQ(t == Truth::True, oracle.eval(m, f)) << to_string(f) << "\n" << print_model(m);
  }
}

TEST(Properties, WandAgreesWithWiderEnumeration) {
  gen::Rng r(23);
  gen::Vocab v;
  std::size_t checked = 0;
  while (checked < 60) {
    Model m = random_model(r, 2, 2);
    Formula f = gen::pseqsl(r, v, 1 + gen::pick(r, 3));
    if (wands(f) != 1 || formula_size(f) > 2) continue;
    ++checked;
    // D plus two locations beyond every natural in play.
    Oracle oracle{{1, 2, 3, 4, 5}, {}};
    for (const Word& w : gen::all_words({n(1), n(2), nil, n(4)}, 1)) oracle.contents.push_back(w);
    for (const SeqTerm& t : seq_terms(f)) {
      Word w = eval_seq_term(m, t);
      if (w.size() > 1) oracle.contents.push_back(w);
    }
    Truth t = check(m, f).truth;
    ASSERT_NE(t, Truth::Unknown) << to_string(f);
    EXPECT_EQ(t == Truth::True, oracle.eval(m, f)) << to_string(f) << "\n" << print_model(m);
  }
}

TEST(Properties, QuantifierFreeNeverUnknown) {
  gen::Rng r(24);
  gen::Vocab v;
  for (int i = 0; i < 400; ++i) {
    Model m = random_model(r, 3, 3);
    Formula f = gen::pseqsl(r, v, gen::pick(r, 7));
    EXPECT_NE(check(m, f).truth, Truth::Unknown) << to_string(f);
  }
}

TEST(Checker, ReusableAcrossModels) {
  gen::Rng r(25);
  gen::Vocab v;
  for (int i = 0; i < 50; ++i) {
    Formula f = gen::pseqsl(r, v, gen::pick(r, 5));
    Checker c(f);
    for (int j = 0; j < 5; ++j) {
      Model m = random_model(r, 2, 2);
      EXPECT_EQ(c.check(m).truth, check(m, f).truth);
    }
  }
}

TEST(Check, Trace) {
  Model m;
  m.stack = {{"x", n(1)}};
  m.heap = {{1, {n(2)}}};
  CheckConfig cfg;
  cfg.trace = true;
  Verdict3 v = check(m, parse_formula("exists @a. x |-> @a"), cfg);
  EXPECT_EQ(v.truth, Truth::True);
  EXPECT_FALSE(v.trace.empty());
}
