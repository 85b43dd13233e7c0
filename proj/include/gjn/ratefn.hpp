#pragma once

#include <string>
#include <vector>

#include "gjn/barrier.hpp"
#include "gjn/distribution.hpp"
#include "gjn/face.hpp"
#include "gjn/network.hpp"

namespace gjn {

/// pi(u) = u ln u - u + 1, pi(0) = 1, pi(inf) = inf.
double pi_entropy(double u);

/// Legendre-type rate psi(u) = sup_{theta < beta} (theta - u ln E exp(theta X))
/// with its first two derivatives in u. Infinite where the supremum diverges.
Derivs legendre_rate(const Distribution& dist, double u);

/// Rate function of the renewal counting process at rate alpha. For a 'none'
/// arrival marker: 0 at alpha = 0, +inf otherwise.
double psi_arrival(const Distribution& dist, double alpha);
double psi_service(const Distribution& dist, double delta);

/// Routing relative entropy of a substochastic row rho against p, including
/// the exit term. Conventions: 0 where p_l = rho_l = 0, +inf where p_l = 0 < rho_l.
double psi_routing(const Vec& p_row, const Vec& rho_row);

/// Aggregate rate psi_J(alpha, delta, rho). The k in J service term is
/// psi^S_k(max(delta_k, mu_k)), equal to psi^S_k(delta_k) 1{delta_k > mu_k}.
double psi_total(const Network& net, const Face& J, const Vec& alpha, const Vec& delta,
                 const Mat& rho);

/// Minimiser of the variational problem Psi_J(y) in flow variables.
struct RateEval {
  double value = 0.0;  // nats per unit time; +inf when infeasible
  Vec alpha;           // arrival rates
  Vec delta;           // departure rates
  Mat z;               // z_kl = delta_k rho_kl
  Mat rho;             // routing; rows with delta_k = 0 copy P
  SolveStatus status = SolveStatus::Optimal;
  bool near_boundary = false;  // some alpha_k or delta_k within 1e-9 of 0
  int newton_steps = 0;

  bool converged() const { return status == SolveStatus::Optimal || status == SolveStatus::Infeasible; }
};

RateEval big_psi(const Network& net, const Face& J, const Vec& y, const BarrierOptions& opts = {});

/// L(x, y) = Psi_{J(x)}(y) with J(x) = {k : x_k == 0}.
double local_rate(const Network& net, const Vec& x, const Vec& y);
RateEval local_rate_eval(const Network& net, const Vec& x, const Vec& y);

}  // namespace gjn
