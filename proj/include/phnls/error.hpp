#pragma once

#include <stdexcept>
#include <string>

namespace phnls {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };
struct EmptySample : Error { using Error::Error; };
struct BlowUpDetected : Error { using Error::Error; };
struct AssumptionViolated : Error { using Error::Error; };

// Raised for malformed configuration; key() names the offending entry.
struct ConfigError : Error {
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace phnls
