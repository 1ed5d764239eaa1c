#ifndef CTBN_TIME_GRID_HPP
#define CTBN_TIME_GRID_HPP

#include <cstddef>
#include <vector>

namespace ctbn {

// Integration grid on [0, T]: breakpoints at all observation times, uniform
// substeps within each segment. Every breakpoint is a grid point.
class TimeGrid {
 public:
  // dt_target caps the substep length; each segment is divided evenly.
  static TimeGrid build(double t_end, const std::vector<double>& breakpoints,
                        double dt_target);

  std::size_t size() const { return times_.size(); }
  double time(std::size_t k) const { return times_[k]; }
  double t_end() const { return times_.back(); }
  bool is_breakpoint(std::size_t k) const { return is_break_[k]; }
  // Index of the grid point at time t (within 1e-12); breakpoints only.
  std::size_t index_of_breakpoint(double t) const;

  double max_step() const;

 private:
  std::vector<double> times_;
  std::vector<char> is_break_;
};

}  // namespace ctbn

#endif
