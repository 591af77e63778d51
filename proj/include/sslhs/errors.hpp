#pragma once

#include <stdexcept>
#include <string>

namespace sslhs {

/// Invalid run configuration or experiment file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model failed to produce a finite value (in-process or black-box).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a usable result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sslhs
