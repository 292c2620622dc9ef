#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace csf {

enum class ErrorKind {
  DegenerateTriple,
  Underresolved,
  BudgetExceeded,
  PreconditionViolated,
  InvalidArc,
  ResolutionCollapse,
  Io,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers can branch
/// without parsing messages. `indices` lists offending vertices when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<std::size_t> indices = {})
      : std::runtime_error(what), kind_(kind), indices_(std::move(indices)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  ErrorKind kind_;
  std::vector<std::size_t> indices_;
};

}  // namespace csf
