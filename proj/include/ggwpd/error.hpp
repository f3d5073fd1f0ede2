#pragma once

#include <stdexcept>
#include <string>

namespace ggwpd {

enum class NumericalErrorKind {
  singular_system,
  non_convergence,
  runaway,
  caustic,
  not_hyperbolic,
  refinement_cap,
};

const char* to_string(NumericalErrorKind kind);

class NumericalError : public std::runtime_error {
 public:
  NumericalError(NumericalErrorKind kind, const std::string& what, double last_residual = -1.0)
      : std::runtime_error(what), kind_(kind), last_residual_(last_residual) {}

  NumericalErrorKind kind() const { return kind_; }
  // negative when no residual was available
  double last_residual() const { return last_residual_; }

 private:
  NumericalErrorKind kind_;
  double last_residual_;
};

}  // namespace ggwpd
