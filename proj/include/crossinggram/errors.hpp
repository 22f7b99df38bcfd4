#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <crossinggram/lattice.hpp>

namespace crossinggram {

// Bad arguments or configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data. Maps to CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sites required by a neighbourhood computation are absent from the sample.
class MissingSupport : public DataError {
 public:
  explicit MissingSupport(std::vector<LatticePoint> missing);

  const std::vector<LatticePoint>& missing() const noexcept { return missing_; }

 private:
  std::vector<LatticePoint> missing_;
};

// Numerical failure such as a ratio with an empty denominator. Exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No replicate exceeds the level anywhere in the region.
class NoExceedances : public NumericalError {
 public:
  explicit NoExceedances(double level);

  double level() const noexcept { return level_; }

 private:
  double level_;
};

}  // namespace crossinggram
