#pragma once

#include <vector>

#include "gjn/face.hpp"
#include "gjn/network.hpp"
#include "gjn/path.hpp"

namespace gjn {

/// Zero-cost departure rates on face J: the fixed point of
/// delta_k = min(mu_k, lambda_k + sum_l p_lk delta_l) for k in J and
/// delta_k = mu_k otherwise, reached by monotone iteration from 0.
Vec fluid_throughput(const Network& net, const Face& J);

struct FluidResult {
  PiecewisePath path;        // ends with a constant-zero tail
  double emptying_time = 0;  // first time the path reaches the origin
  std::vector<Face> faces;   // effective face on each segment before emptying
};

/// Event-driven integration of the law-of-large-numbers trajectory
/// q' = lambda + (P^T - I) delta(J(q)). Pinned coordinates stay exactly zero.
FluidResult integrate_fluid(const Network& net, const Vec& x0, double tail = 1.0);

/// Horizon by which every fluid path started in the Euclidean ball of the
/// given radius has reached the origin, from the linear decay of
/// 1 . (I - P^T)^{-1} q along fluid dynamics.
double emptying_bound(const Network& net, double radius);

/// 1 . (I - P^T)^{-1} q.
double fluid_lyapunov(const Network& net, const Vec& q);

}  // namespace gjn
