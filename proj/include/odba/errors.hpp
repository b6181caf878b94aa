// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace odba {

// Dense eigensolver failed or produced an unusably ill-conditioned
// eigenvector matrix; carries the condition estimate so callers can decide
// to re-randomize parameters.
class EigenvalueError : public std::runtime_error {
 public:
  EigenvalueError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

// Sampled data is not a polynomial of the claimed degree.
class DegreeError : public std::runtime_error {
 public:
  DegreeError(const std::string& what, double mismatch)
      : std::runtime_error(what), mismatch_(mismatch) {}
  double mismatch() const noexcept { return mismatch_; }

 private:
  double mismatch_;
};

// A root or evaluation point fell on (or too close to) a pole manifold.
class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An extrapolation or iteration failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A commuting family has (numerically) degenerate joint spectrum.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace odba
