#ifndef PHIFST_ERROR_HPP
#define PHIFST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace phifst {

// Domain error with a stable machine-readable code. The CLI prints the code
// on stderr and exits 1. Codes in use:
//   undefined-path, empty-machine, initial-undefined, not-monotonic,
//   epsilon-in-domain, multi-symbol-output, precondition-violation,
//   cyclic-graph, negative-log-weight, zero-sum-state, syntax-error,
//   invariant-violation
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace phifst

#endif  // PHIFST_ERROR_HPP
