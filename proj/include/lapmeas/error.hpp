#pragma once

#include <stdexcept>
#include <string>

namespace lapmeas {

// Malformed or out-of-contract input (dimension mismatch, non-Hermitian
// where Hermitian is required, bad file contents).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A configured enumeration or memory guard would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A value would leave the binary64 range (e.g. e^{t*lambda} overflow).
class RangeError : public std::range_error {
 public:
  explicit RangeError(const std::string& what) : std::range_error(what) {}
};

}  // namespace lapmeas
