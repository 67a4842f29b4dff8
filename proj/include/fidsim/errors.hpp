#pragma once

#include <stdexcept>
#include <string>

namespace fidsim {

/// Raised for invalid configuration input (bad keys, inadmissible parameter
/// combinations). The CLI maps this to exit code 2; all other runtime
/// failures map to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fidsim
