#include "gjn/fluid.hpp"

#include <cmath>
#include <limits>

#include "gjn/errors.hpp"

namespace gjn {

namespace {

constexpr double kFixedPointTol = 1e-12;
constexpr long kFixedPointCap = 1'000'000;

void require_stable(const Network& net) {
  if (!validate_network(net).pass()) {
    throw NetworkError("fluid computations need a valid subcritical network");
  }
}

}  // namespace

Vec fluid_throughput(const Network& net, const Face& J) {
  if (J.K() != net.K) throw InvalidInput("fluid_throughput: face dimension mismatch");
  Vec delta = Vec::Zero(net.K);
  for (long it = 0; it < kFixedPointCap; ++it) {
    const Vec inflow = net.lambda + net.P.transpose() * delta;
    Vec next(net.K);
    for (int k = 0; k < net.K; ++k) next[k] = J.contains(k) ? std::min(net.mu[k], inflow[k]) : net.mu[k];
    const double change = (next - delta).lpNorm<Eigen::Infinity>();
    delta = next;
    if (change <= kFixedPointTol * std::max(1.0, delta.lpNorm<Eigen::Infinity>())) return delta;
  }
  throw NetworkError("fluid_throughput: fixed-point iteration did not converge");
}

double fluid_lyapunov(const Network& net, const Vec& q) {
  const Mat A = Mat::Identity(net.K, net.K) - net.P.transpose();
  return A.fullPivLu().solve(q).sum();
}

FluidResult integrate_fluid(const Network& net, const Vec& x0, double tail) {
  if (x0.size() != net.K) throw InvalidInput("integrate_fluid: dimension mismatch");
  if (!x0.allFinite() || (x0.array() < 0.0).any()) throw InvalidInput("integrate_fluid: x0 must be nonnegative");
  if (!(tail > 0.0)) throw InvalidInput("integrate_fluid: tail must be positive");
  require_stable(net);

  const int K = net.K;
  const long max_changes = 4L * (1L << K);
  const double scale = std::max({1.0, net.lambda.lpNorm<Eigen::Infinity>(), net.mu.lpNorm<Eigen::Infinity>()});
  std::vector<double> times{0.0};
  std::vector<Vec> positions{x0};
  FluidResult out;
  Vec x = x0;
  double t = 0.0;
  long changes = 0;

  while ((x.array() != 0.0).any()) {
    Face J = Face::of_zeros(x);
    Vec delta = fluid_throughput(net, J);
    // Release pinned stations whose unconstrained drift is strictly positive;
    // ties stay pinned.
    for (bool released = true; released;) {
      released = false;
      const Vec inflow = net.lambda + net.P.transpose() * delta;
      std::uint32_t mask = J.mask();
      for (int k : J.members()) {
        if (inflow[k] - net.mu[k] > 1e-12 * scale) {
          mask &= ~(1u << k);
          released = true;
        }
      }
      if (released) {
        J = Face(K, mask);
        delta = fluid_throughput(net, J);
      }
    }
    Vec v = net.lambda + net.P.transpose() * delta - delta;
    for (int k : J.members()) v[k] = 0.0;

    double dt = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      if (!J.contains(k) && v[k] < 0.0) dt = std::min(dt, x[k] / -v[k]);
    }
    if (!std::isfinite(dt)) throw NetworkError("integrate_fluid: no coordinate drains (network not subcritical?)");

    Vec next = x + dt * v;
    for (int k = 0; k < K; ++k) {
      if (J.contains(k)) next[k] = 0.0;
      else if (v[k] < 0.0 && x[k] / -v[k] <= dt * (1.0 + 1e-12)) next[k] = 0.0;
      else next[k] = std::max(0.0, next[k]);
    }
    t += dt;
    x = next;
    times.push_back(t);
    positions.push_back(x);
    out.faces.push_back(J);
    if (++changes > max_changes) {
      throw NetworkError("integrate_fluid: face-change guard tripped after " + std::to_string(changes) + " changes");
    }
  }
  out.emptying_time = t;
  times.push_back(t + tail);
  positions.push_back(Vec::Zero(K));
  out.path = PiecewisePath(std::move(times), std::move(positions));
  return out;
}

double emptying_bound(const Network& net, double radius) {
  if (!(radius >= 0.0)) throw InvalidInput("emptying_bound: radius must be >= 0");
  require_stable(net);
  if (radius == 0.0) return 0.0;
  const int K = net.K;
  const Vec nu = traffic_intensity(net).nu;
  double margin = std::numeric_limits<double>::infinity();
  const std::uint32_t all = Face::all(K).mask();
  for (std::uint32_t m = 0; m < all; ++m) {
    const Vec delta = fluid_throughput(net, Face(K, m));
    margin = std::min(margin, (delta - nu).sum());
  }
  const Mat A = Mat::Identity(K, K) - net.P.transpose();
  // Phi(q) = 1^T A^{-1} q <= |A^{-T} 1|_2 |q|_2.
  const double c1 = A.transpose().fullPivLu().solve(Vec::Ones(K)).norm();
  return c1 * radius / margin;
}

}  // namespace gjn
