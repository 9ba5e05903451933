#pragma once

#include <cstddef>

namespace tcljump {

// Uniform grid t_k = k * dt, k = 0..steps.
struct TimeGrid {
  double dt = 1e-3;
  std::size_t steps = 0;

  // Throws DomainError unless t_end is a whole multiple of dt (to 1e-9).
  static TimeGrid uniform(double t_end, double dt);

  std::size_t size() const noexcept { return steps + 1; }
  double operator[](std::size_t k) const noexcept { return dt * static_cast<double>(k); }
  double t_end() const noexcept { return dt * static_cast<double>(steps); }
  // True when `other` samples a subset of this grid (other.dt = m * dt).
  bool contains(const TimeGrid& other) const noexcept;
  std::size_t stride_to(const TimeGrid& coarser) const;
};

}  // namespace tcljump
