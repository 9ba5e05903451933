#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tcljump {

// Operand shapes do not agree (vector/operator dimensions, grids).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of an operation (negative time, wrong model
// variant for a method, malformed parameters).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// |c1(t)| fell below the amplitude floor; the time-local rate diverges here.
class AmplitudeZeroError : public std::runtime_error {
 public:
  AmplitudeZeroError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Iterated-trapezoid refinement hit its grid cap without meeting tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deterministic integration left its stability envelope.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// A single stochastic trajectory had to be abandoned.
class TrajectoryAbort : public std::runtime_error {
 public:
  TrajectoryAbort(const std::string& what, std::uint64_t seed,
                  std::uint64_t index, double time)
      : std::runtime_error(what), seed_(seed), index_(index), time_(time) {}
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t index() const noexcept { return index_; }
  double time() const noexcept { return time_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  double time_;
};

}  // namespace tcljump
