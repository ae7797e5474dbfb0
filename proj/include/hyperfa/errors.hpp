#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hyperfa {

/// Argument outside the mathematical domain of a function (x <= 0, NaN, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A parameterization constraint was violated (e.g. |Sigma| != 1 on the
/// (chi, phi) path).
class ConstraintViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed user input: shapes, labels, CSV cells.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A conditional-maximization step cannot be formed; the current start is
/// abandoned.
class DegenerateUpdate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite component density; carries the offending (row, component).
class NonFiniteDensity : public std::runtime_error {
 public:
  NonFiniteDensity(long row, int component, const std::string& what)
      : std::runtime_error(what), row_(row), component_(component) {}
  long row() const noexcept { return row_; }
  int component() const noexcept { return component_; }

 private:
  long row_;
  int component_;
};

/// Every start of a fit was abandoned.
class FitFailure : public std::runtime_error {
 public:
  FitFailure(const std::string& what, std::vector<std::string> reasons)
      : std::runtime_error(what), reasons_(std::move(reasons)) {}
  const std::vector<std::string>& reasons() const noexcept { return reasons_; }

 private:
  std::vector<std::string> reasons_;
};

/// Every cell of a selection grid failed.
class SelectionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hyperfa
