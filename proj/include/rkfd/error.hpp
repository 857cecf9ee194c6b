#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rkfd {

/// Coefficient set violates a tableau invariant (dimensions, finiteness, consistency).
class TableauError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tableau file could not be read or does not match the schema.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& field,
             const std::string& message);

  const std::string& path() const noexcept { return path_; }
  /// 1-based line of the offending token, 0 when not known.
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string path_;
  std::size_t line_;
  std::string field_;
};

/// Right-hand side evaluated outside its domain (e.g. at a pole).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A step produced a non-finite value or the right-hand side failed mid-run.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, double x, const std::string& detail);

  std::size_t step() const noexcept { return step_; }
  double x() const noexcept { return x_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t step_;
  double x_;
  std::string detail_;
};

}  // namespace rkfd
