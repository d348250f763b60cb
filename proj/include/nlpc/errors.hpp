#pragma once

#include <stdexcept>
#include <string>

namespace nlpc {

// Malformed or unreadable file content: bad magic, version mismatch,
// truncated payload, unsupported WAV layout.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure, e.g. an invalid autocorrelation sequence or a signal
// with no valid gain.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlpc
