#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqsl {

// A letter of the model: one of the two atoms or a natural number.
// Naturals double as locations. Ordering puts naturals first, then nil, then #.
class Value {
 public:
  enum class Kind : std::uint8_t { Nat, Nil, Hash };

  constexpr Value() : raw_(0) {}
  static constexpr Value nat(std::uint64_t n) { return Value(n); }
  static constexpr Value nil() { return Value(kNilRaw); }
  static constexpr Value hash() { return Value(kHashRaw); }

  constexpr Kind kind() const {
    return raw_ == kNilRaw ? Kind::Nil : raw_ == kHashRaw ? Kind::Hash : Kind::Nat;
  }
  constexpr bool is_atom() const { return raw_ >= kNilRaw; }
  constexpr bool is_nat() const { return raw_ < kNilRaw; }
  std::uint64_t nat_value() const {
    if (!is_nat()) throw std::logic_error("atom has no numeric value");
    return raw_;
  }
  constexpr std::uint64_t raw() const { return raw_; }

  std::string str() const;

  constexpr auto operator<=>(const Value&) const = default;

  static constexpr std::uint64_t kMaxNat = (std::uint64_t{1} << 62);

 private:
  constexpr explicit Value(std::uint64_t r) : raw_(r) {}
  static constexpr std::uint64_t kNilRaw = ~std::uint64_t{0} - 1;
  static constexpr std::uint64_t kHashRaw = ~std::uint64_t{0};
  std::uint64_t raw_;
};

using Word = std::vector<Value>;

std::string word_str(const Word& w);

// Parses "nil", "#" or a decimal natural.
Value parse_value(const std::string& text);

}  // namespace seqsl

template <>
struct std::hash<seqsl::Value> {
  std::size_t operator()(const seqsl::Value& v) const noexcept {
    return std::hash<std::uint64_t>()(v.raw());
  }
};
