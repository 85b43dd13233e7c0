#include "gjn/path.hpp"

#include <algorithm>
#include <cmath>

#include "gjn/errors.hpp"

namespace gjn {

PiecewisePath::PiecewisePath(std::vector<double> times, std::vector<Vec> positions)
    : times_(std::move(times)), positions_(std::move(positions)) {
  if (times_.empty() || times_.size() != positions_.size()) {
    throw InvalidInput("path needs matching, nonempty breakpoint and position lists");
  }
  if (times_.front() != 0.0) throw InvalidInput("path must start at t = 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]) || !std::isfinite(times_[i])) {
      throw InvalidInput("path breakpoints must increase strictly");
    }
  }
  const Eigen::Index K = positions_.front().size();
  for (const Vec& x : positions_) {
    if (x.size() != K) throw InvalidInput("path positions differ in dimension");
    if (!x.allFinite() || (x.array() < 0.0).any()) throw InvalidInput("path leaves the nonnegative orthant");
  }
}

Vec PiecewisePath::slope(int seg) const {
  const auto i = static_cast<std::size_t>(seg);
  return (positions_[i + 1] - positions_[i]) / duration(seg);
}

Face PiecewisePath::segment_face(int seg) const {
  const auto i = static_cast<std::size_t>(seg);
  return Face::of_zeros(positions_[i]).intersect(Face::of_zeros(positions_[i + 1]));
}

Vec PiecewisePath::midpoint(int seg) const {
  const auto i = static_cast<std::size_t>(seg);
  Vec m = 0.5 * (positions_[i] + positions_[i + 1]);
  // Coordinates pinned at both ends stay exactly zero.
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (positions_[i][k] == 0.0 && positions_[i + 1][k] == 0.0) m[k] = 0.0;
  }
  return m;
}

Vec PiecewisePath::at(double t) const {
  if (t <= 0.0) return positions_.front();
  if (t >= times_.back()) return positions_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto i = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
  const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
  Vec x = (1.0 - w) * positions_[i] + w * positions_[i + 1];
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (positions_[i][k] == 0.0 && positions_[i + 1][k] == 0.0) x[k] = 0.0;
  }
  return x.cwiseMax(0.0);
}

}  // namespace gjn
