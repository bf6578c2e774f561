#pragma once

#include <stdexcept>
#include <string>

namespace nlos {

// Bad user-facing configuration: CLI flags, config files, parameter ranges.
// Maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad data: malformed files, shape mismatches, non-finite payloads,
// missing coverage. Maps to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nlos
