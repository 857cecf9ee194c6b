#include "rkfd/error.hpp"

#include <sstream>

namespace rkfd {

namespace {

std::string parse_message(const std::string& path, std::size_t line, const std::string& field,
                          const std::string& message) {
  std::ostringstream out;
  out << path;
  if (line > 0) out << ":" << line;
  out << ": ";
  if (!field.empty()) out << "field '" << field << "': ";
  out << message;
  return out.str();
}

std::string divergence_message(std::size_t step, double x, const std::string& detail) {
  std::ostringstream out;
  out.precision(17);
  out << "integration diverged at step " << step << " (x = " << x << "): " << detail;
  return out.str();
}

}  // namespace

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& field,
                       const std::string& message)
    : std::runtime_error(parse_message(path, line, field, message)),
      path_(path),
      line_(line),
      field_(field) {}

DivergenceError::DivergenceError(std::size_t step, double x, const std::string& detail)
    : std::runtime_error(divergence_message(step, x, detail)), step_(step), x_(x), detail_(detail) {}

}  // namespace rkfd
