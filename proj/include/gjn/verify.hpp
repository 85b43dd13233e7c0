#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gjn/action.hpp"
#include "gjn/distribution.hpp"
#include "gjn/network.hpp"

namespace gjn {

/// Stationary law of an exponential Jackson network: independent geometric
/// marginals with ratios r_k = nu_k / mu_k.
struct ProductFormOracle {
  Vec r;
  Vec nu;

  /// sum_k x_k ln(1 / r_k)
  double V(const Vec& x) const;
  /// P(Q = q)
  double pmf(const std::vector<std::int64_t>& q) const;
  /// P(Q_k = m)
  double marginal(int k, std::int64_t m) const;
};

/// Throws NetworkError ("oracle unavailable") unless every primitive is
/// exponential and the network is subcritical.
ProductFormOracle product_form_oracle(const Network& net);

struct SlopePoint {
  double n = 0.0;
  long trials = 0;  // replications, or batches for time averages
  long hits = 0;
  double p = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double neg_log_p = 0.0;  // +inf when hits == 0
  bool reliable = false;   // hits >= 10
  double weight = 0.0;     // 1 / var(ln p); 0 lets the fit use hits / (1 - p)
};

/// Weighted least squares of -ln p_n against n over the points with hits > 0.
struct SlopeEstimate {
  std::vector<SlopePoint> points;
  bool defined = false;  // false when fewer than two grid points were hit
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::string note;
};

SlopeEstimate fit_decay_rate(std::vector<SlopePoint> points);

struct SlopeOptions {
  double ball_radius = -1.0;     // default 0.1 ||x|| (0.1 when x = 0)
  double burnin_factor = 10.0;   // T_n = n * burnin_factor * emptying_bound(||x|| + radius)
  bool parallel = true;
};

/// P(||Q(T_n)/n - x|| < radius) from empty starts, one ensemble per n.
SlopeEstimate ldp_slope_estimate(const Network& net, const Vec& x, const std::vector<double>& n_grid, int reps,
                                 std::uint64_t seed, const SlopeOptions& opts = {});

enum class TailMode { Total, Max, Joint };

std::string to_string(TailMode m);
TailMode tail_mode_from_string(const std::string& s);

struct TailOptions {
  TailMode mode = TailMode::Total;
  int batches = 50;
  int min_batches = 20;
  double min_batch_length = 10.0;
};

struct TailEstimate {
  double level = 0.0;
  double p = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double std_error = 0.0;
  int batches = 0;
  long entries = 0;  // number of times the set was entered
  double root = 0.0;  // p^(1/level)
};

/// Long-run fraction of time in {sum Q >= m}, {max Q >= m} or {Q_k >= m for
/// all k} after `burnin`, with a batch-means 95% interval. One trace serves
/// every level.
std::vector<TailEstimate> stationary_tail_estimate(const Network& net, const std::vector<double>& levels,
                                                   double burnin, double horizon, std::uint64_t seed,
                                                   const TailOptions& opts = {});

/// Decay of the stationary tails in the level, fitted as for ldp_slope_estimate.
SlopeEstimate tail_slope_estimate(const std::vector<TailEstimate>& tails);

struct ChernoffBound {
  double eps = 0.0;
  double sigma = 1.0;
  double alpha = 0.0;
  double lower_branch = 0.0;  // exponent of the downward-count branch at alpha
  double upper_branch = 0.0;  // exponent of the upward-count branch at alpha
};

/// Exponent of each branch of the renewal-count Chernoff bound at tilt alpha;
/// the upward branch is -inf when lambda <= eps (event impossible).
double chernoff_branch_low(const Distribution& d, double eps, double alpha);
double chernoff_branch_high(const Distribution& d, double eps, double alpha);

ChernoffBound renewal_ld_sigma(const Distribution& d, double eps);

struct EnvelopeRow {
  double n = 0.0;
  double t = 0.0;
  double p = 0.0;
  double bound = 0.0;  // sigma^(n t)
  double ratio = 0.0;  // p / bound
};

struct EnvelopeCheck {
  ChernoffBound bound;
  std::vector<EnvelopeRow> rows;
  double C = 0.0;  // max ratio
};

/// Empirical P(|N(nt)/n - lambda t| > eps t) for a renewal counting process.
EnvelopeCheck chernoff_envelope(const Distribution& d, double eps, const std::vector<double>& n_grid,
                                const std::vector<double>& t_grid, int reps, std::uint64_t seed,
                                bool parallel = true);

struct CouplingResult {
  int reps = 0;
  int coupled = 0;
  std::vector<double> times;  // +inf when not coupled within the horizon
  std::vector<double> grid;
  std::vector<double> survival;
  bool defined = false;
  double rate = 0.0;  // fitted exponential tail rate
  double r2 = 0.0;
  double mean = 0.0;  // over coupled replications
  std::string note;
};

/// Two copies driven by the same primitive streams; records the first time
/// their queue vectors coincide and fits ln P(T > t) linearly over the tail.
CouplingResult coupling_tv_probe(const Network& net, const std::vector<std::int64_t>& qa,
                                 const std::vector<std::int64_t>& qb, double horizon, int reps,
                                 std::uint64_t seed, bool parallel = true);

struct TvResult {
  double tv = 0.0;
  int truncation = 0;
  double outside_empirical = 0.0;
  double outside_oracle = 0.0;
  long events = 0;
};

/// Total variation between the time-average law on {0..m}^K (the rest lumped
/// into one cell) and the product form.
TvResult stationary_tv_product_form(const Network& net, int truncation, double burnin, double horizon,
                                    std::uint64_t seed);

struct OracleRow {
  Vec x;
  double computed = 0.0;
  double oracle = 0.0;
  double rel_error = 0.0;
  bool pass = false;
};

std::vector<OracleRow> oracle_crosscheck(const Network& net, const std::vector<Vec>& points, double rel_tol,
                                         const ActionOptions& opts = {});

}  // namespace gjn
