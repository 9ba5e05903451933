#include "tcljump/grid.hpp"

#include "tcljump/errors.hpp"

#include <cmath>
#include <string>

namespace tcljump {

TimeGrid TimeGrid::uniform(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("TimeGrid: dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("TimeGrid: t_end must be >= 0");
  const double n = std::round(t_end / dt);
  if (std::abs(n * dt - t_end) > 1e-9 * std::max(1.0, t_end)) {
    throw DomainError("TimeGrid: t_end=" + std::to_string(t_end) + " is not a multiple of dt=" +
                      std::to_string(dt));
  }
  return TimeGrid{dt, static_cast<std::size_t>(n)};
}

bool TimeGrid::contains(const TimeGrid& other) const noexcept {
  if (other.steps == 0) return true;
  const double m = std::round(other.dt / dt);
  if (m < 1.0 || std::abs(m * dt - other.dt) > 1e-9 * other.dt) return false;
  return static_cast<std::size_t>(m) * other.steps <= steps;
}

std::size_t TimeGrid::stride_to(const TimeGrid& coarser) const {
  if (!contains(coarser)) throw DimensionError("TimeGrid: output grid is not a subset of the step grid");
  return static_cast<std::size_t>(std::round(coarser.dt / dt));
}

}  // namespace tcljump
