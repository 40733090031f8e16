#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqsl/formula.hpp"
#include "seqsl/value.hpp"

namespace seqsl {

using Stack = std::map<std::string, Value>;
// Keys are sequence variable names without the leading '@'.
using SeqAssignment = std::map<std::string, Word>;
using GroundHeap = std::map<std::uint64_t, Word>;
using SymbolicHeap = std::map<std::uint64_t, SeqTerm>;

struct Model {
  Stack stack;
  SeqAssignment seq;
  GroundHeap heap;
  bool operator==(const Model&) const = default;
};

Value eval_ind_term(const Model& m, const IndTerm& t);
Word eval_seq_term(const Model& m, const SeqTerm& t);

template <class Heap>
std::optional<Heap> disjoint_union(const Heap& h1, const Heap& h2) {
  Heap out = h1;
  for (const auto& [k, v] : h2)
    if (!out.emplace(k, v).second) return std::nullopt;
  return out;
}

// All 2^|dom h| ordered splits: bit i of the counter sends the i-th smallest
// location to the first component.
template <class Heap>
std::vector<std::pair<Heap, Heap>> heap_splits(const Heap& h) {
  std::vector<typename Heap::const_iterator> cells;
  for (auto it = h.begin(); it != h.end(); ++it) cells.push_back(it);
  std::vector<std::pair<Heap, Heap>> out;
  const std::uint64_t n = std::uint64_t{1} << cells.size();
  out.reserve(n);
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    Heap a, b;
    for (std::size_t i = 0; i < cells.size(); ++i)
      ((mask >> i) & 1 ? a : b).insert(*cells[i]);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

Model parse_model(const std::string& json_text);
std::string print_model(const Model& m, int indent = -1);
Model load_model(const std::string& path);
void save_model(const Model& m, const std::string& path);

// Symbolic view of a ground heap.
SymbolicHeap to_symbolic(const GroundHeap& h);

}  // namespace seqsl
