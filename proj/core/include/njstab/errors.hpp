#pragma once

#include <stdexcept>
#include <string>

namespace njstab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad argument values: malformed elements, out-of-range parameters,
/// dimension mismatches.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (unknown tags, bad field values). Messages carry
/// the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A computation produced non-finite values.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A user-supplied callable violated its contract (e.g. a control function
/// returned a negative value).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Not enough data points for the requested estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Every tuple of a sample cloud was skipped during fitting.
class DegenerateCloudError : public Error {
 public:
  using Error::Error;
};

/// File input/output failure; message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace njstab
