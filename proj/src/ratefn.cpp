#include "gjn/ratefn.hpp"

#include <cmath>
#include <limits>

#include "gjn/errors.hpp"
#include "gjn/segment_program.hpp"

namespace gjn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solves Lambda'(beta - s) = 1/u for the gap s > 0, in w = ln s where the
// equation is close to linear for every supported family.
double solve_gap(const Distribution& dist, double u) {
  auto F = [&](double w, double* dF) {
    const double s = std::exp(w);
    const Derivs c = dist.cumulant_at_gap(s);
    if (dF) *dF = -(c.d2 / c.d1) * s;
    return std::log(c.d1) + std::log(u);
  };
  double shape = 1.0;
  if (dist.family() == Family::Erlang || dist.family() == Family::Gamma) shape = dist.params()[0];
  double w = std::log(shape * u);
  double lo = -kInf, hi = kInf;  // F(lo) > 0 > F(hi)
  for (int it = 0; it < 200; ++it) {
    double dF = 0.0;
    const double val = F(w, &dF);
    if (val == 0.0) return std::exp(w);
    if (val > 0.0) lo = std::max(lo, w);
    else hi = std::min(hi, w);
    double step = (dF < 0.0) ? -val / dF : (val > 0.0 ? 1.0 : -1.0);
    step = std::clamp(step, -8.0, 8.0);
    double next = w + step;
    if (std::isfinite(lo) && std::isfinite(hi) && (next <= lo || next >= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 1e-15 * std::max(1.0, std::abs(w))) return std::exp(next);
    w = next;
  }
  return std::exp(w);
}

}  // namespace

double pi_entropy(double u) {
  if (std::isnan(u) || u < 0.0) throw InvalidInput("pi_entropy needs u >= 0");
  if (u == 0.0) return 1.0;
  if (std::isinf(u)) return kInf;
  return u * std::log(u) - u + 1.0;
}

Derivs legendre_rate(const Distribution& dist, double u) {
  if (std::isnan(u) || u < 0.0) return {kInf, 0.0, 0.0};
  if (dist.is_none()) return u == 0.0 ? Derivs{0.0, 0.0, 0.0} : Derivs{kInf, 0.0, 0.0};
  if (dist.is_deterministic()) {
    // theta (1 - u d) is bounded above only when u d = 1.
    const double d = dist.params()[0];
    return std::abs(u * d - 1.0) <= 1e-12 ? Derivs{0.0, 0.0, 0.0} : Derivs{kInf, 0.0, 0.0};
  }
  const double beta = dist.domain_sup();
  if (u == 0.0) return {beta, -kInf, kInf};
  const double s = solve_gap(dist, u);
  const Derivs c = dist.cumulant_at_gap(s);
  const double theta = beta - s;
  // The supremum is >= 0 (theta = 0); clamp rounding below it.
  return {std::max(0.0, theta - u * c.value), -c.value, 1.0 / (u * u * u * c.d2)};
}

double psi_arrival(const Distribution& dist, double alpha) {
  if (std::isnan(alpha) || alpha < 0.0) throw InvalidInput("psi_arrival needs alpha >= 0");
  return legendre_rate(dist, alpha).value;
}

double psi_service(const Distribution& dist, double delta) {
  if (std::isnan(delta) || delta < 0.0) throw InvalidInput("psi_service needs delta >= 0");
  return legendre_rate(dist, delta).value;
}

double psi_routing(const Vec& p_row, const Vec& rho_row) {
  if (p_row.size() != rho_row.size()) throw InvalidInput("psi_routing: row sizes differ");
  constexpr double kSlack = 1e-12;
  if ((p_row.array() < 0.0).any() || (rho_row.array() < 0.0).any() || p_row.sum() > 1.0 + kSlack ||
      rho_row.sum() > 1.0 + kSlack) {
    throw InvalidInput("psi_routing: rows must be substochastic");
  }
  auto term = [](double p, double r) {
    if (p == 0.0) return r == 0.0 ? 0.0 : kInf;
    return p * pi_entropy(r / p);
  };
  double total = 0.0;
  for (Eigen::Index l = 0; l < p_row.size(); ++l) total += term(p_row[l], rho_row[l]);
  const double p_exit = std::max(0.0, 1.0 - p_row.sum());
  const double r_exit = std::max(0.0, 1.0 - rho_row.sum());
  // Exit masses within rounding of zero count as zero.
  total += term(p_exit <= kSlack ? 0.0 : p_exit, r_exit <= kSlack ? 0.0 : r_exit);
  return total;
}

double psi_total(const Network& net, const Face& J, const Vec& alpha, const Vec& delta, const Mat& rho) {
  const int K = net.K;
  if (alpha.size() != K || delta.size() != K || rho.rows() != K || rho.cols() != K || J.K() != K) {
    throw InvalidInput("psi_total: inconsistent shapes");
  }
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    total += psi_arrival(net.arrivals[ks], alpha[k]);
    if (J.contains(k)) {
      total += psi_service(net.services[ks], std::max(delta[k], net.mu[k]));
    } else {
      total += psi_service(net.services[ks], delta[k]);
    }
    // infinity * 0 = 0 for idle rows.
    if (delta[k] > 0.0) total += delta[k] * psi_routing(net.P.row(k).transpose(), rho.row(k).transpose());
  }
  return total;
}

RateEval big_psi(const Network& net, const Face& J, const Vec& y, const BarrierOptions& opts) {
  if (y.size() != net.K || J.K() != net.K) throw InvalidInput("big_psi: dimension mismatch");
  SegmentProgramSpec spec;
  spec.faces = {J};
  spec.rate_mode = true;
  spec.y = y;
  const ProgramSolution sol = solve_segment_program(net, spec, opts);

  RateEval out;
  out.status = sol.status;
  out.newton_steps = sol.newton_steps;
  const int K = net.K;
  out.alpha = Vec::Zero(K);
  out.delta = Vec::Zero(K);
  out.z = Mat::Zero(K, K);
  out.rho = net.P;
  if (sol.status == SolveStatus::Infeasible) {
    out.value = kInf;
    return out;
  }
  const SegmentSolution& seg = sol.segments.front();
  out.value = std::max(0.0, sol.value);
  out.alpha = seg.arrivals;
  out.delta = seg.departures;
  out.z = seg.flows;
  for (int k = 0; k < K; ++k) {
    if (out.delta[k] > 0.0) out.rho.row(k) = out.z.row(k) / out.delta[k];
    if ((net.has_arrivals(k) && out.alpha[k] < 1e-9) || out.delta[k] < 1e-9) out.near_boundary = true;
  }
  return out;
}

RateEval local_rate_eval(const Network& net, const Vec& x, const Vec& y) {
  if (x.size() != net.K) throw InvalidInput("local_rate: dimension mismatch");
  if ((x.array() < 0.0).any() || !x.allFinite()) throw InvalidInput("local_rate: x must lie in the nonnegative orthant");
  return big_psi(net, Face::of_zeros(x), y);
}

double local_rate(const Network& net, const Vec& x, const Vec& y) {
  return local_rate_eval(net, x, y).value;
}

}  // namespace gjn
