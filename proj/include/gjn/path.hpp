#pragma once

#include <vector>

#include "gjn/face.hpp"
#include "gjn/network.hpp"

namespace gjn {

/// Piecewise-linear trajectory in the nonnegative orthant. Breakpoint
/// coordinates carry exact zeros; a segment's face is the intersection of its
/// endpoint zero-sets. Beyond the last breakpoint the path is held constant.
class PiecewisePath {
 public:
  PiecewisePath() = default;
  /// Throws InvalidInput unless times start at 0, increase strictly, and all
  /// coordinates are finite and nonnegative.
  PiecewisePath(std::vector<double> times, std::vector<Vec> positions);

  int dim() const { return positions_.empty() ? 0 : static_cast<int>(positions_.front().size()); }
  int segments() const { return static_cast<int>(times_.size()) - 1; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec>& positions() const { return positions_; }
  double end_time() const { return times_.back(); }

  double duration(int seg) const { return times_[static_cast<std::size_t>(seg) + 1] - times_[static_cast<std::size_t>(seg)]; }
  Vec slope(int seg) const;
  Face segment_face(int seg) const;
  Vec at(double t) const;
  Vec midpoint(int seg) const;

 private:
  std::vector<double> times_;
  std::vector<Vec> positions_;
};

}  // namespace gjn
