#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gjn {

/// Set J of stations pinned at zero. Faces are detected by exact zero
/// equality; callers must carry exact zeros.
class Face {
 public:
  Face() = default;
  Face(int K, std::uint32_t mask);

  static Face empty(int K) { return Face(K, 0u); }
  static Face all(int K);
  static Face of_zeros(const Eigen::VectorXd& x);
  static Face from_indices(int K, const std::vector<int>& stations);

  int K() const { return K_; }
  std::uint32_t mask() const { return mask_; }
  bool contains(int k) const { return (mask_ >> k) & 1u; }
  bool is_all() const { return *this == all(K_); }
  bool is_empty() const { return mask_ == 0u; }
  Face complement() const;
  Face intersect(const Face& other) const { return Face(K_, mask_ & other.mask_); }
  bool subset_of(const Face& other) const { return (mask_ & ~other.mask_) == 0u; }
  std::vector<int> members() const;
  std::string str() const;

  bool operator==(const Face& o) const { return K_ == o.K_ && mask_ == o.mask_; }
  bool operator!=(const Face& o) const { return !(*this == o); }

 private:
  int K_ = 0;
  std::uint32_t mask_ = 0;
};

}  // namespace gjn
