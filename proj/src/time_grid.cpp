#include "ctbn/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctbn/errors.hpp"

namespace ctbn {

TimeGrid TimeGrid::build(double t_end, const std::vector<double>& breakpoints,
                         double dt_target) {
  if (t_end <= 0.0) throw InvalidModelError("grid horizon must be positive");
  if (dt_target <= 0.0) throw InvalidModelError("dt must be positive");

  std::vector<double> breaks{0.0};
  {
    std::vector<double> sorted = breakpoints;
    std::sort(sorted.begin(), sorted.end());
    for (double t : sorted) {
      if (t < 0.0 || t > t_end) {
        throw FormatError("breakpoint outside [0, t_end]");
      }
      if (t - breaks.back() > 1e-12) breaks.push_back(t);
    }
  }
  if (t_end - breaks.back() > 1e-12) {
    breaks.push_back(t_end);
  } else {
    breaks.back() = t_end;
  }

  TimeGrid grid;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double len = breaks[b + 1] - breaks[b];
    const auto steps = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(len / dt_target - 1e-9)));
    for (std::size_t k = 0; k < steps; ++k) {
      grid.times_.push_back(breaks[b] + len * static_cast<double>(k) /
                                            static_cast<double>(steps));
      grid.is_break_.push_back(k == 0 ? 1 : 0);
    }
  }
  grid.times_.push_back(t_end);
  grid.is_break_.push_back(1);
  if (breaks.size() == 1) grid.is_break_.front() = 1;
  return grid;
}

std::size_t TimeGrid::index_of_breakpoint(double t) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t - 1e-12);
  if (it == times_.end() || std::abs(*it - t) > 1e-9) {
    throw FormatError("time " + std::to_string(t) + " is not a grid point");
  }
  return static_cast<std::size_t>(it - times_.begin());
}

double TimeGrid::max_step() const {
  double mx = 0.0;
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    mx = std::max(mx, times_[k + 1] - times_[k]);
  }
  return mx;
}

}  // namespace ctbn
