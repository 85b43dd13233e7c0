#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gjn/distribution.hpp"

namespace gjn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Generalised Jackson network: K single-server FIFO stations with renewal
/// exogenous arrivals, renewal services and Markovian routing P.
///
/// Immutable after construction; `lambda` and `mu` are cached rates.
struct Network {
  int K = 0;
  Mat P;
  std::vector<Distribution> arrivals;
  std::vector<Distribution> services;
  Vec lambda;  // exogenous arrival rates (0 for 'none')
  Vec mu;      // service rates

  /// Probability of leaving the network after service at station k.
  double exit_prob(int k) const;
  bool has_arrivals(int k) const { return !arrivals[static_cast<std::size_t>(k)].is_none(); }
};

/// Checks dimensions and entry ranges and caches derived rates.
/// Subcriticality is left to validate_network.
Network make_network(int K, const Mat& P, std::vector<Distribution> arrivals,
                     std::vector<Distribution> services);

/// Largest eigenvalue modulus of a square nonnegative matrix.
double spectral_radius(const Mat& P);

struct TrafficSolution {
  Vec nu;           // throughputs, (I - P^T) nu = lambda
  Vec utilization;  // nu_k / mu_k
};

TrafficSolution traffic_intensity(const Network& net);

struct ValidationCheck {
  std::string name;
  bool hard = true;
  bool pass = true;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  /// True iff every hard check passes; soft checks only warn.
  bool pass() const;
  std::vector<std::string> warnings() const;
  bool subcritical() const;
};

ValidationReport validate_network(const Network& net);

/// Stations that can ever hold customers: those with exogenous arrivals and
/// everything reachable from them through the support of P.
std::vector<bool> reachable_stations(const Network& net);

}  // namespace gjn
