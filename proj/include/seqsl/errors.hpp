#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqsl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(const std::string& name)
      : std::runtime_error("unbound variable " + name) {}
};

// Raised when an operation needs a PSeqSL formula and gets something else.
class FragmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MacroError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seqsl
