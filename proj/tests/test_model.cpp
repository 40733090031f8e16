#include <gtest/gtest.h>

#include <filesystem>

#include "gen.hpp"
#include "seqsl/errors.hpp"
#include "seqsl/model.hpp"
#include "seqsl/parser.hpp"

using namespace seqsl;

namespace {

const Value nil = Value::nil();
const Value hash = Value::hash();
Value n(std::uint64_t v) { return Value::nat(v); }

Model sample() {
  Model m;
  m.stack = {{"x1", n(1)}, {"x2", nil}, {"x3", hash}};
  m.seq = {{"a", {n(1), nil}}, {"b", {}}};
  m.heap = {{1, {n(2), hash}}, {2, {}}};
  return m;
}

GroundHeap random_heap(gen::Rng& r, std::uint64_t max_loc) {
  GroundHeap h;
  for (std::uint64_t l = 1; l <= max_loc; ++l)
    if (gen::coin(r, 2)) h[l] = gen::word(r, {n(1), n(2), nil}, 2);
  return h;
}

}  // namespace

TEST(Values, Ordering) {
  EXPECT_LT(n(0), n(5));
  EXPECT_LT(n(1u << 30), nil);
  EXPECT_LT(nil, hash);
  EXPECT_TRUE(nil.is_atom());
  EXPECT_FALSE(n(3).is_atom());
  EXPECT_THROW(nil.nat_value(), std::logic_error);
  EXPECT_EQ(parse_value("nil"), nil);
  EXPECT_EQ(parse_value("#"), hash);
  EXPECT_EQ(parse_value("42"), n(42));
  EXPECT_THROW(parse_value("x"), std::invalid_argument);
  EXPECT_EQ(word_str({n(1), nil, hash}), "1 ^ nil ^ #");
}

TEST(Eval, Terms) {
  Model m = sample();
  EXPECT_EQ(eval_ind_term(m, iv("x1")), n(1));
  EXPECT_EQ(eval_ind_term(m, IndTerm::hash()), hash);
  EXPECT_EQ(eval_seq_term(m, parse_seq_term("@a ^ x1 ^ @b ^ x2")), (Word{n(1), nil, n(1), nil}));
  EXPECT_EQ(eval_seq_term(m, SeqTerm::empty()), Word{});
  EXPECT_THROW(eval_ind_term(m, iv("y")), UnboundVariable);
  EXPECT_THROW(eval_seq_term(m, sv("c")), UnboundVariable);
}

TEST(Eval, ConcatIsHomomorphic) {
  gen::Rng r(2);
  gen::Vocab v;
  Model m = sample();
  for (int i = 0; i < 200; ++i) {
    SeqTerm a = gen::seq(r, v), b = gen::seq(r, v);
    Word wa = eval_seq_term(m, a), wb = eval_seq_term(m, b);
    wa.insert(wa.end(), wb.begin(), wb.end());
    EXPECT_EQ(eval_seq_term(m, SeqTerm::concat(a, b)), wa);
  }
}

TEST(Heap, DisjointUnion) {
  GroundHeap a{{1, {n(1)}}}, b{{2, {}}}, c{{1, {}}};
  auto ab = disjoint_union(a, b);
  ASSERT_TRUE(ab);
  EXPECT_EQ(ab->size(), 2u);
  EXPECT_FALSE(disjoint_union(a, c));
  EXPECT_EQ(*disjoint_union(a, GroundHeap{}), a);
}

TEST(Heap, UnionLaws) {
  gen::Rng r(9);
  for (int i = 0; i < 300; ++i) {
    GroundHeap a = random_heap(r, 4), b = random_heap(r, 4), c = random_heap(r, 4);
    auto ab = disjoint_union(a, b), ba = disjoint_union(b, a);
    ASSERT_EQ(ab.has_value(), ba.has_value());
    if (ab) EXPECT_EQ(*ab, *ba);
    std::optional<GroundHeap> left, right;
    if (ab) left = disjoint_union(*ab, c);
    if (auto bc = disjoint_union(b, c)) right = disjoint_union(a, *bc);
    EXPECT_EQ(left, right);
  }
}

TEST(Heap, SplitsEnumerateEveryPartition) {
  GroundHeap h{{1, {}}, {3, {n(1)}}, {7, {nil}}};
  auto splits = heap_splits(h);
  ASSERT_EQ(splits.size(), 8u);
  EXPECT_TRUE(splits[0].first.empty());
  EXPECT_EQ(splits[0].second, h);
  EXPECT_EQ(splits[1].first, (GroundHeap{{1, {}}}));
  EXPECT_EQ(splits[4].first, (GroundHeap{{7, {nil}}}));
  EXPECT_EQ(splits[7].first, h);
  std::set<GroundHeap> firsts;
  for (const auto& [a, b] : splits) {
    EXPECT_EQ(*disjoint_union(a, b), h);
    firsts.insert(a);
  }
  EXPECT_EQ(firsts.size(), 8u);
  EXPECT_EQ(heap_splits(GroundHeap{}).size(), 1u);
}

TEST(Json, RoundTrip) {
  Model m = sample();
  EXPECT_EQ(parse_model(print_model(m)), m);
  EXPECT_EQ(parse_model(print_model(m, 2)), m);
  Model e;
  EXPECT_EQ(parse_model(print_model(e)), e);
  EXPECT_EQ(parse_model("{}"), e);
}

TEST(Json, Format) {
  Model m = parse_model(R"({"stack": {"x": 3, "y": "nil"}, "seq": {"@a": [1, "#"]}, "heap": {"3": [1, "nil"]}})");
  EXPECT_EQ(m.stack.at("x"), n(3));
  EXPECT_EQ(m.stack.at("y"), nil);
  EXPECT_EQ(m.seq.at("a"), (Word{n(1), hash}));
  EXPECT_EQ(m.heap.at(3), (Word{n(1), nil}));
}

TEST(Json, Errors) {
  EXPECT_THROW(parse_model("{"), ModelError);
  EXPECT_THROW(parse_model("[]"), ModelError);
  EXPECT_THROW(parse_model(R"({"heap": {"nil": []}})"), ModelError);
  EXPECT_THROW(parse_model(R"({"heap": {"0": []}})"), ModelError);
  EXPECT_THROW(parse_model(R"({"heap": {"x": []}})"), ModelError);
  EXPECT_THROW(parse_model(R"({"heap": {"1": 5}})"), ModelError);
  EXPECT_THROW(parse_model(R"({"seq": {"a": []}})"), ModelError);
  EXPECT_THROW(parse_model(R"({"stack": {"x": -1}})"), ModelError);
  EXPECT_THROW(parse_model(R"({"stack": {"x": "foo"}})"), ModelError);
  EXPECT_THROW(parse_model(R"({"stacks": {}})"), ModelError);
}

TEST(Json, Files) {
  auto path = std::filesystem::temp_directory_path() / "seqsl_model_test.json";
  save_model(sample(), path.string());
  EXPECT_EQ(load_model(path.string()), sample());
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path.string()), ModelError);
}

TEST(Heap, Symbolic) {
  SymbolicHeap s = to_symbolic({{2, {n(1), nil}}});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(eval_seq_term(Model{}, s.at(2)), (Word{n(1), nil}));
}
