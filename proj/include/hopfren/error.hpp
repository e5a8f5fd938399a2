#pragma once

#include <stdexcept>
#include <string>

namespace hopfren {

enum class ErrorCode {
  ParseError,     // malformed input file or text format
  SemanticError,  // structurally valid input violating a theory invariant
  ResourceCap,    // enumeration or basis construction exceeded a configured cap
  IllFormedHopf,  // divergent subgraph with residue outside the residue set
  TruncationError,// operation would need data beyond the truncation cap
  Mismatch,       // operands belong to different theories or algebras
  Unsupported,    // operation not defined for the given theory (e.g. 2-valent enumeration)
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

} // namespace hopfren
