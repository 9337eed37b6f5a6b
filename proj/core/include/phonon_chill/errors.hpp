// errors.hpp - exception types shared by the library and the CLI
#pragma once

#include <stdexcept>
#include <string>

namespace phonon_chill {

// Invalid physical parameters, layouts or configuration values.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not produce a trustworthy result.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested Liouvillian would exceed the configured size budget.
class MemoryCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phonon_chill
