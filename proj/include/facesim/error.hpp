#pragma once

#include <stdexcept>
#include <string>

namespace facesim {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or unreadable input files (manifests, images, configs).
struct ManifestError : Error {
  using Error::Error;
};

// Raster data violating an invariant (dims, alpha range, bounds).
struct ImageError : Error {
  using Error::Error;
};

// Numeric preconditions (rank, component counts, parameter ranges).
struct MathError : Error {
  using Error::Error;
};

// Experiment / CLI configuration problems.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace facesim
