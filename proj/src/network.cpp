#include "gjn/network.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "gjn/errors.hpp"

namespace gjn {

namespace {

constexpr double kRadiusTol = 1e-12;
constexpr int kPowerIterCap = 10000;

std::string fmt_vec(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

// Power iteration on I + P: the shift makes the Perron root dominant even
// when P is periodic. Returns a negative value when it fails to settle.
double power_iteration_radius(const Mat& P) {
  const Eigen::Index n = P.rows();
  const Mat shifted = Mat::Identity(n, n) + P;
  Vec v = Vec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double estimate = 0.0;
  for (int it = 0; it < kPowerIterCap; ++it) {
    Vec w = shifted * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = norm / v.norm();
    v = w / norm;
    if (it > 0 && std::abs(next - estimate) <= kRadiusTol * std::max(1.0, next)) {
      return std::max(0.0, next - 1.0);
    }
    estimate = next;
  }
  return -1.0;
}

}  // namespace

double Network::exit_prob(int k) const { return std::max(0.0, 1.0 - P.row(k).sum()); }

Network make_network(int K, const Mat& P, std::vector<Distribution> arrivals,
                     std::vector<Distribution> services) {
  if (K < 1) throw InvalidInput("station count K must be >= 1");
  if (P.rows() != K || P.cols() != K) throw InvalidInput("routing matrix must be K x K");
  if (static_cast<int>(arrivals.size()) != K || static_cast<int>(services.size()) != K) {
    throw InvalidInput("need exactly K arrival and K service distributions");
  }
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < K; ++l) {
      const double p = P(k, l);
      if (!std::isfinite(p) || p < 0.0) throw InvalidInput("negative routing probability");
      if (p > 1.0) throw InvalidInput("routing probability above 1");
    }
    if (services[static_cast<std::size_t>(k)].is_none()) {
      throw InvalidInput("every station needs a service distribution");
    }
  }
  Network net;
  net.K = K;
  net.P = P;
  net.arrivals = std::move(arrivals);
  net.services = std::move(services);
  net.lambda.resize(K);
  net.mu.resize(K);
  for (int k = 0; k < K; ++k) {
    net.lambda[k] = net.arrivals[static_cast<std::size_t>(k)].rate();
    net.mu[k] = net.services[static_cast<std::size_t>(k)].rate();
  }
  return net;
}

double spectral_radius(const Mat& P) {
  if (P.rows() != P.cols()) throw InvalidInput("spectral_radius needs a square matrix");
  if (P.rows() == 0) return 0.0;
  const double r = power_iteration_radius(P);
  if (r >= 0.0) return r;
  if (P.rows() <= 8) {
    // Defective (e.g. nilpotent) matrices make the shifted iteration crawl.
    Eigen::EigenSolver<Mat> es(P, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  throw NetworkError("spectral radius: power iteration did not converge");
}

TrafficSolution traffic_intensity(const Network& net) {
  if (spectral_radius(net.P) >= 1.0) {
    throw NetworkError("traffic equations singular: spectral radius of P >= 1");
  }
  const Mat A = Mat::Identity(net.K, net.K) - net.P.transpose();
  TrafficSolution sol;
  sol.nu = A.fullPivLu().solve(net.lambda);
  // One refinement step keeps the residual at machine level.
  sol.nu += A.fullPivLu().solve(net.lambda - A * sol.nu);
  sol.nu = sol.nu.cwiseMax(0.0);
  sol.utilization = sol.nu.cwiseQuotient(net.mu);
  return sol;
}

bool ValidationReport::pass() const {
  for (const auto& c : checks) {
    if (c.hard && !c.pass) return false;
  }
  return true;
}

bool ValidationReport::subcritical() const {
  for (const auto& c : checks) {
    if (c.name == "subcritical") return c.pass;
  }
  return false;
}

std::vector<std::string> ValidationReport::warnings() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.hard && !c.pass) out.push_back(c.name + ": " + c.message);
  }
  return out;
}

ValidationReport validate_network(const Network& net) {
  ValidationReport rep;
  const int K = net.K;

  ValidationCheck sub{"substochastic", true, true, "rows of P sum to at most 1"};
  for (int k = 0; k < K; ++k) {
    const double s = net.P.row(k).sum();
    if (s > 1.0 + 1e-12) {
      sub.pass = false;
      sub.message = "row " + std::to_string(k) + " of P sums to " + std::to_string(s);
    }
  }
  rep.checks.push_back(sub);

  const double radius = spectral_radius(net.P);
  ValidationCheck rad{"spectral_radius", true, radius < 1.0,
                      "spectral radius of P = " + std::to_string(radius)};
  rep.checks.push_back(rad);

  ValidationCheck crit{"subcritical", true, false, ""};
  if (rad.pass) {
    const TrafficSolution ts = traffic_intensity(net);
    crit.pass = (net.mu.array() > ts.nu.array()).all();
    crit.message = "throughput " + fmt_vec(ts.nu) + " vs service rates " + fmt_vec(net.mu);
  } else {
    crit.message = "traffic equations have no nonnegative solution";
  }
  rep.checks.push_back(crit);

  ValidationCheck moments{"exponential_moments", false, true, "beta_k > 0 and gamma_k > 0"};
  ValidationCheck density{"right_derivative_at_zero", false, true,
                          "all interarrival/service laws have positive density at 0"};
  ValidationCheck support{"unbounded_interarrival_support", false, true,
                          "P(xi_k > u) > 0 for all u"};
  for (int k = 0; k < K; ++k) {
    const auto& a = net.arrivals[static_cast<std::size_t>(k)];
    const auto& s = net.services[static_cast<std::size_t>(k)];
    if ((!a.is_none() && !(a.domain_sup() > 0.0)) || !(s.domain_sup() > 0.0)) {
      moments.pass = false;
      moments.message = "station " + std::to_string(k) + " lacks exponential moments";
    }
    if ((!a.is_none() && !a.positive_density_at_zero()) || !s.positive_density_at_zero()) {
      density.pass = false;
      density.message = "station " + std::to_string(k) +
                        ": LDP/ergodicity assumptions not met (distribution function not "
                        "right-differentiable at 0 with positive derivative)";
    }
    if (!a.is_none() && !a.unbounded_support()) {
      support.pass = false;
      support.message = "station " + std::to_string(k) +
                        ": bounded interarrival support, ergodicity assumption not met";
    }
  }
  rep.checks.push_back(moments);
  rep.checks.push_back(density);
  rep.checks.push_back(support);
  return rep;
}

std::vector<bool> reachable_stations(const Network& net) {
  std::vector<bool> seen(static_cast<std::size_t>(net.K), false);
  std::vector<int> stack;
  for (int k = 0; k < net.K; ++k) {
    if (net.has_arrivals(k)) {
      seen[static_cast<std::size_t>(k)] = true;
      stack.push_back(k);
    }
  }
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    for (int l = 0; l < net.K; ++l) {
      if (net.P(k, l) > 0.0 && !seen[static_cast<std::size_t>(l)]) {
        seen[static_cast<std::size_t>(l)] = true;
        stack.push_back(l);
      }
    }
  }
  return seen;
}

}  // namespace gjn
