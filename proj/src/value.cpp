#include "seqsl/value.hpp"

#include <charconv>

namespace seqsl {

std::string Value::str() const {
  switch (kind()) {
    case Kind::Nil:
      return "nil";
    case Kind::Hash:
      return "#";
    case Kind::Nat:
      break;
  }
  return std::to_string(raw_);
}

std::string word_str(const Word& w) {
  if (w.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += " ^ ";
    out += w[i].str();
  }
  return out;
}

Value parse_value(const std::string& text) {
  if (text == "nil") return Value::nil();
  if (text == "#") return Value::hash();
  std::uint64_t n = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty() || n >= Value::kMaxNat)
    throw std::invalid_argument("not a value: '" + text + "'");
  return Value::nat(n);
}

}  // namespace seqsl
