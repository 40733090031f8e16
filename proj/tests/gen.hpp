#pragma once

#include <random>
#include <string>
#include <vector>

#include "seqsl/formula.hpp"
#include "seqsl/model.hpp"
#include "seqsl/wordeq.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& r, std::size_t n) { return static_cast<std::size_t>(r() % n); }
inline bool coin(Rng& r, std::size_t one_in) { return pick(r, one_in) == 0; }

struct Vocab {
  std::vector<std::string> progs{"x1", "x2", "x3"};
  std::vector<std::string> seqs{"a", "b"};
  bool constants = false;  // nil/# only when false
};

inline seqsl::IndTerm ind(Rng& r, const Vocab& v) {
  std::size_t k = pick(r, v.progs.size() + 2);
  if (k < v.progs.size()) return seqsl::IndTerm::var(v.progs[k]);
  if (k == v.progs.size()) return seqsl::IndTerm::nil();
  return v.constants ? seqsl::IndTerm::nat(1 + pick(r, 3)) : seqsl::IndTerm::hash();
}

inline seqsl::SeqTerm seq(Rng& r, const Vocab& v, std::size_t max_leaves = 3) {
  std::size_t n = pick(r, max_leaves + 1);
  std::vector<seqsl::SeqTerm> parts;
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(r, 2))
      parts.push_back(seqsl::sv(v.seqs[pick(r, v.seqs.size())]));
    else
      parts.push_back(seqsl::SeqTerm::lift(ind(r, v)));
  }
  return seqsl::cat(parts);
}

inline seqsl::Formula atom(Rng& r, const Vocab& v) {
  using namespace seqsl;
  switch (pick(r, 6)) {
    case 0: {
      IndTerm a = ind(r, v);
      return mk::ind_eq(a, ind(r, v));
    }
    case 1: {
      SeqTerm a = seq(r, v);
      return mk::seq_eq(a, seq(r, v));
    }
    case 2:
      return mk::emp();
    case 3:
      return mk::false_();
    default: {
      IndTerm x = IndTerm::var(v.progs[pick(r, v.progs.size())]);
      return mk::points_to(x, seq(r, v));
    }
  }
}

// A quantifier-free formula with exactly `connectives` binary or unary connectives.
inline seqsl::Formula pseqsl(Rng& r, const Vocab& v, std::size_t connectives, bool wand = true) {
  using namespace seqsl;
  if (connectives == 0) return atom(r, v);
  std::size_t k = pick(r, wand ? 6 : 5);
  if (k == 0) return mk::not_(pseqsl(r, v, connectives - 1, wand));
  std::size_t left = pick(r, connectives);
  Formula a = pseqsl(r, v, left, wand);
  Formula b = pseqsl(r, v, connectives - 1 - left, wand);
  switch (k) {
    case 1:
      return mk::and_(a, b);
    case 2:
      return mk::or_(a, b);
    case 3:
      return mk::implies(a, b);
    case 4:
      return mk::sep(a, b);
    default:
      return mk::wand(a, b);
  }
}

inline seqsl::Word word(Rng& r, const std::vector<seqsl::Value>& letters, std::size_t max_len) {
  seqsl::Word w;
  std::size_t n = pick(r, max_len + 1);
  for (std::size_t i = 0; i < n; ++i) w.push_back(letters[pick(r, letters.size())]);
  return w;
}

// Every word over letters of length at most max_len, shortest first.
inline std::vector<seqsl::Word> all_words(const std::vector<seqsl::Value>& letters, std::size_t max_len) {
  std::vector<seqsl::Word> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < max_len)
      for (seqsl::Value l : letters) {
        seqsl::Word w = out[i];
        w.push_back(l);
        out.push_back(std::move(w));
      }
  return out;
}

inline seqsl::WordTerm word_term(Rng& r, const std::vector<std::string>& vars, const seqsl::Alphabet& sigma,
                                 std::size_t max_len) {
  seqsl::WordTerm t;
  std::size_t n = pick(r, max_len + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = pick(r, vars.size() + sigma.size());
    if (k < vars.size())
      t.push_back(seqsl::WSym::of_var(vars[k]));
    else
      t.push_back(seqsl::WSym::let(sigma[k - vars.size()]));
  }
  return t;
}

// Boolean combination of `literals` equations; each node is negated with probability 1/3.
inline seqsl::WordFormula word_formula(Rng& r, std::size_t literals, const std::vector<std::string>& vars,
                                       const seqsl::Alphabet& sigma) {
  using seqsl::WordFormula;
  WordFormula f;
  if (literals == 1) {
    seqsl::WordTerm lhs = word_term(r, vars, sigma, 3);
    f = WordFormula::eq(lhs, word_term(r, vars, sigma, 3));
  } else {
    std::size_t a = 1 + pick(r, literals - 1);
    WordFormula lhs = word_formula(r, a, vars, sigma);
    WordFormula rhs = word_formula(r, literals - a, vars, sigma);
    f = coin(r, 2) ? WordFormula::and_({lhs, rhs}) : WordFormula::or_({lhs, rhs});
  }
  if (coin(r, 3)) f = WordFormula::not_(f);
  return f;
}

}  // namespace gen
