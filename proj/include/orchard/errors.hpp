#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orchard {

/// Invalid scene / detector / planner configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain an operation is defined on.
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PlanningError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Text that failed to parse; `position()` is the 0-based character offset
/// of the offending token.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace orchard
