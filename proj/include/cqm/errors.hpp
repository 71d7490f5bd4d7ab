#ifndef CQM_ERRORS_HPP_
#define CQM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cqm {

// Base class for all domain errors raised by the library. Each module
// defines named subclasses so callers can catch specific conditions.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cqm

#endif  // CQM_ERRORS_HPP_
