#pragma once

#include <stdexcept>
#include <string>

namespace eigenweight {

// Error taxonomy shared by the whole library.  The CLI maps these to
// distinct exit codes: input_error -> 4, precision_error -> 3, everything
// else derived from error -> 2.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent external input (files, CLI arguments).
class input_error : public error {
 public:
  explicit input_error(const std::string& msg) : error(msg) {}
};

// A stated invariant failed: bad operand (non-unit where a unit is
// required), mismatched contexts, inconsistent fixture data.
class invariant_error : public error {
 public:
  explicit invariant_error(const std::string& msg) : error(msg) {}
};

// The working precision N cannot support the requested computation
// (reconstruction bounds too large, series bounds negative, ...).
class precision_error : public error {
 public:
  explicit precision_error(const std::string& msg) : error(msg) {}
};

}  // namespace eigenweight
