#include "gjn/face.hpp"

#include "gjn/errors.hpp"

namespace gjn {

Face::Face(int K, std::uint32_t mask) : K_(K), mask_(mask) {
  if (K < 0 || K > 31) throw InvalidInput("faces support 0..31 stations");
  if (K < 32 && (mask >> K) != 0u) throw InvalidInput("face mask names stations beyond K");
}

Face Face::all(int K) { return Face(K, K == 0 ? 0u : ((1u << K) - 1u)); }

Face Face::of_zeros(const Eigen::VectorXd& x) {
  std::uint32_t m = 0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x[k] == 0.0) m |= (1u << k);
  }
  return Face(static_cast<int>(x.size()), m);
}

Face Face::from_indices(int K, const std::vector<int>& stations) {
  std::uint32_t m = 0;
  for (int k : stations) {
    if (k < 0 || k >= K) throw InvalidInput("face member out of range");
    m |= (1u << k);
  }
  return Face(K, m);
}

Face Face::complement() const { return Face(K_, all(K_).mask_ & ~mask_); }

std::vector<int> Face::members() const {
  std::vector<int> out;
  for (int k = 0; k < K_; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::string Face::str() const {
  std::string s = "{";
  bool first = true;
  for (int k : members()) {
    s += (first ? "" : ",") + std::to_string(k + 1);
    first = false;
  }
  return s + "}";
}

}  // namespace gjn
