#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dvsched {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed DFG or library document. line is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), m_line(line) {}

  [[nodiscard]] auto line() const -> std::size_t { return m_line; }

 private:
  std::size_t m_line;
};

// Well-formed input that breaks a structural invariant (cycles, unknown ids, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration refused because the instance is too large.
class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t estimate, const std::string& what) : Error(what), m_estimate(estimate) {}

  [[nodiscard]] auto estimate() const -> std::uint64_t { return m_estimate; }

 private:
  std::uint64_t m_estimate;
};

}  // namespace dvsched
