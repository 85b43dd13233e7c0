#include "gjn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/minima.hpp>

#include "gjn/errors.hpp"
#include "gjn/fluid.hpp"
#include "gjn/seeds.hpp"
#include "gjn/simulate.hpp"

namespace gjn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ = 1.959963984540054;  // two-sided 95%

// Wilson score interval
std::pair<double, double> wilson(long hits, long n) {
  if (n <= 0) return {0.0, 1.0};
  const double p = static_cast<double>(hits) / n;
  const double z2 = kZ * kZ;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

bool all_exponential(const Network& net) {
  for (int k = 0; k < net.K; ++k) {
    const auto& a = net.arrivals[static_cast<std::size_t>(k)];
    if (!a.is_none() && a.family() != Family::Exponential) return false;
    if (net.services[static_cast<std::size_t>(k)].family() != Family::Exponential) return false;
  }
  return true;
}

// Feeds piecewise-constant queue states of one run into `acc(a, b, q)`.
template <class Acc>
long walk_states(const Network& net, const std::vector<std::int64_t>& q0, double horizon, std::uint64_t seed,
                 Acc&& acc) {
  NetworkSimulator sim(net, q0, seed, 0);
  double prev_t = 0.0;
  std::vector<std::int64_t> prev_q = q0;
  long events = 0;
  auto on_event = [&](const SimEvent& e) {
    ++events;
    if (e.time > prev_t) acc(prev_t, e.time, prev_q);
    prev_t = e.time;
    prev_q = sim.queue();
  };
  while (sim.step(horizon, on_event)) {
  }
  if (horizon > prev_t) acc(prev_t, horizon, prev_q);
  return events;
}

}  // namespace

double ProductFormOracle::V(const Vec& x) const {
  double v = 0.0;
  for (int k = 0; k < r.size(); ++k) v += x(k) * -std::log(r(k));
  return v;
}

double ProductFormOracle::marginal(int k, std::int64_t m) const {
  if (m < 0) return 0.0;
  return (1.0 - r(k)) * std::pow(r(k), static_cast<double>(m));
}

double ProductFormOracle::pmf(const std::vector<std::int64_t>& q) const {
  if (static_cast<int>(q.size()) != r.size()) throw InvalidInput("pmf: state has wrong dimension");
  double p = 1.0;
  for (int k = 0; k < r.size(); ++k) p *= marginal(k, q[static_cast<std::size_t>(k)]);
  return p;
}

ProductFormOracle product_form_oracle(const Network& net) {
  if (!all_exponential(net)) throw NetworkError("oracle unavailable: product form needs exponential primitives");
  const auto tr = traffic_intensity(net);
  for (int k = 0; k < net.K; ++k)
    if (!(tr.utilization(k) < 1.0)) throw NetworkError("oracle unavailable: network is not subcritical");
  ProductFormOracle o;
  o.nu = tr.nu;
  o.r = tr.utilization;
  return o;
}

SlopeEstimate fit_decay_rate(std::vector<SlopePoint> points) {
  SlopeEstimate est;
  double sw = 0, sx = 0, sy = 0;
  std::vector<double> w(points.size(), 0.0);
  int used = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& pt = points[i];
    pt.reliable = pt.hits >= 10;
    pt.neg_log_p = pt.p > 0.0 ? -std::log(pt.p) : kInf;
    if (!(pt.p > 0.0)) continue;
    double wi = pt.weight;
    if (!(wi > 0.0)) wi = pt.p < 1.0 ? static_cast<double>(pt.hits) / (1.0 - pt.p) : static_cast<double>(pt.hits) * 1e6;
    if (!(wi > 0.0) || !std::isfinite(wi)) wi = 1.0;
    w[i] = wi;
    sw += wi;
    sx += wi * pt.n;
    sy += wi * pt.neg_log_p;
    ++used;
  }
  est.points = points;
  if (used < 2) {
    est.note = used == 0 ? "no hits at any n; decay rate undefined" : "only one grid point hit; decay rate undefined";
    return est;
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (w[i] <= 0.0) continue;
    const double dx = points[i].n - mx, dy = points[i].neg_log_p - my;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * dy;
    syy += w[i] * dy * dy;
  }
  if (!(sxx > 0.0)) {
    est.note = "degenerate grid";
    return est;
  }
  est.defined = true;
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  est.slope_se = std::sqrt(1.0 / sxx);
  est.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  long unreliable = std::count_if(points.begin(), points.end(), [](const SlopePoint& p) { return !p.reliable; });
  if (unreliable > 0) est.note = std::to_string(unreliable) + " grid point(s) with fewer than 10 hits";
  return est;
}

SlopeEstimate ldp_slope_estimate(const Network& net, const Vec& x, const std::vector<double>& n_grid, int reps,
                                 std::uint64_t seed, const SlopeOptions& opts) {
  if (x.size() != net.K) throw InvalidInput("ldp_slope_estimate: x has wrong dimension");
  if ((x.array() < 0.0).any()) throw InvalidInput("ldp_slope_estimate: x must be nonnegative");
  if (n_grid.empty()) throw InvalidInput("ldp_slope_estimate: empty n grid");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(n_grid[i] >= 1.0)) throw InvalidInput("ldp_slope_estimate: n must be >= 1");
    if (i > 0 && !(n_grid[i] > n_grid[i - 1])) throw InvalidInput("ldp_slope_estimate: n grid must increase");
  }
  if (!validate_network(net).pass()) throw NetworkError("ldp_slope_estimate: network fails validation");
  double radius = opts.ball_radius;
  if (!(radius > 0.0)) radius = x.norm() > 0.0 ? 0.1 * x.norm() : 0.1;
  const double burnin = opts.burnin_factor * emptying_bound(net, x.norm() + radius);
  const std::vector<std::int64_t> q0(static_cast<std::size_t>(net.K), 0);

  std::vector<SlopePoint> pts;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double n = n_grid[i];
    const std::uint64_t s = derive_seed(seed, "ldp/n:" + std::to_string(i));
    auto ens = run_replications(
        net, q0, n * burnin, n, reps, s, [&](const Vec& z) { return (z - x).norm() < radius; }, opts.parallel);
    SlopePoint pt;
    pt.n = n;
    pt.trials = reps;
    pt.hits = ens.hits;
    pt.p = ens.hit_fraction;
    std::tie(pt.ci_low, pt.ci_high) = wilson(pt.hits, pt.trials);
    pts.push_back(pt);
  }
  return fit_decay_rate(std::move(pts));
}

std::string to_string(TailMode m) {
  switch (m) {
    case TailMode::Total: return "total";
    case TailMode::Max: return "max";
    case TailMode::Joint: return "joint";
  }
  return "?";
}

TailMode tail_mode_from_string(const std::string& s) {
  if (s == "total") return TailMode::Total;
  if (s == "max") return TailMode::Max;
  if (s == "joint") return TailMode::Joint;
  throw InvalidInput("unknown tail mode '" + s + "'");
}

std::vector<TailEstimate> stationary_tail_estimate(const Network& net, const std::vector<double>& levels,
                                                   double burnin, double horizon, std::uint64_t seed,
                                                   const TailOptions& opts) {
  if (!(burnin >= 0.0) || !(horizon > burnin)) throw InvalidInput("stationary_tail_estimate: need horizon > burnin >= 0");
  if (levels.empty()) throw InvalidInput("stationary_tail_estimate: no levels");
  const double span = horizon - burnin;
  const int possible = static_cast<int>(std::floor(span / opts.min_batch_length));
  if (possible < opts.min_batches)
    throw InvalidInput("stationary_tail_estimate: horizon too short for " + std::to_string(opts.min_batches) +
                       " batches");
  const int B = std::max(opts.min_batches, std::min(opts.batches, possible));
  const double blen = span / B;
  const std::size_t L = levels.size();
  std::vector<double> occ(L * static_cast<std::size_t>(B), 0.0);
  std::vector<long> entries(L, 0);
  std::vector<char> inside(L, 0);

  auto indicator = [&](const std::vector<std::int64_t>& q, double m) {
    switch (opts.mode) {
      case TailMode::Total: {
        std::int64_t s = 0;
        for (auto v : q) s += v;
        return static_cast<double>(s) >= m;
      }
      case TailMode::Max: return static_cast<double>(*std::max_element(q.begin(), q.end())) >= m;
      case TailMode::Joint:
        return std::all_of(q.begin(), q.end(), [m](std::int64_t v) { return static_cast<double>(v) >= m; });
    }
    return false;
  };

  auto acc = [&](double a, double b, const std::vector<std::int64_t>& q) {
    a = std::max(a, burnin);
    b = std::min(b, horizon);
    if (!(b > a)) return;
    for (std::size_t l = 0; l < L; ++l) {
      const bool in = indicator(q, levels[l]);
      if (in && !inside[l]) ++entries[l];
      inside[l] = in;
      if (!in) continue;
      double lo = a;
      while (lo < b) {
        const int bi = std::min(B - 1, static_cast<int>((lo - burnin) / blen));
        const double hi = std::min(b, burnin + (bi + 1) * blen);
        occ[l * static_cast<std::size_t>(B) + static_cast<std::size_t>(bi)] += hi - lo;
        if (hi <= lo) break;
        lo = hi;
      }
    }
  };
  const std::vector<std::int64_t> q0(static_cast<std::size_t>(net.K), 0);
  walk_states(net, q0, horizon, seed, acc);

  boost::math::students_t tdist(B - 1);
  const double tq = boost::math::quantile(boost::math::complement(tdist, 0.025));
  std::vector<TailEstimate> out;
  for (std::size_t l = 0; l < L; ++l) {
    TailEstimate e;
    e.level = levels[l];
    e.batches = B;
    e.entries = entries[l];
    double mean = 0.0;
    for (int b = 0; b < B; ++b) mean += occ[l * static_cast<std::size_t>(B) + static_cast<std::size_t>(b)] / blen;
    mean /= B;
    double var = 0.0;
    for (int b = 0; b < B; ++b) {
      const double d = occ[l * static_cast<std::size_t>(B) + static_cast<std::size_t>(b)] / blen - mean;
      var += d * d;
    }
    var /= (B - 1);
    e.p = mean;
    e.std_error = std::sqrt(var / B);
    e.ci_low = std::max(0.0, mean - tq * e.std_error);
    e.ci_high = std::min(1.0, mean + tq * e.std_error);
    e.root = e.level > 0.0 ? std::pow(e.p, 1.0 / e.level) : e.p;
    out.push_back(e);
  }
  return out;
}

SlopeEstimate tail_slope_estimate(const std::vector<TailEstimate>& tails) {
  std::vector<SlopePoint> pts;
  for (const auto& t : tails) {
    SlopePoint pt;
    pt.n = t.level;
    pt.trials = t.batches;
    pt.hits = t.entries;
    pt.p = t.p;
    pt.ci_low = t.ci_low;
    pt.ci_high = t.ci_high;
    if (t.p > 0.0 && t.std_error > 0.0) pt.weight = t.p * t.p / (t.std_error * t.std_error);
    pts.push_back(pt);
  }
  return fit_decay_rate(std::move(pts));
}

double chernoff_branch_low(const Distribution& d, double eps, double alpha) {
  const double lam = d.rate();
  return (lam + eps) * (d.log_mgf(-alpha) + alpha / lam) - alpha * eps / lam;
}

double chernoff_branch_high(const Distribution& d, double eps, double alpha) {
  const double lam = d.rate();
  if (lam <= eps) return -kInf;
  if (!(alpha < d.domain_sup())) return kInf;
  return (lam - eps) * (d.log_mgf(alpha) - alpha / lam) - alpha * eps / lam;
}

ChernoffBound renewal_ld_sigma(const Distribution& d, double eps) {
  if (d.is_none()) throw InvalidInput("renewal_ld_sigma: distribution is 'none'");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("renewal_ld_sigma: eps must be positive (eps = 0 gives sigma = 1)");
  const double lam = d.rate();
  auto f = [&](double a) {
    const double hi = chernoff_branch_high(d, eps, a);
    return std::max(chernoff_branch_low(d, eps, a), hi);
  };
  // Bracket: grow until the objective turns up; cap tilts where the MGF is finite
  // everywhere, otherwise a point mass drives the exponent to -inf.
  const double beta = d.domain_sup();
  const double cap = std::isfinite(beta) ? beta * (1.0 - 1e-12) : 50.0 * lam / eps;
  double hi = std::min(lam, cap);
  for (int i = 0; i < 200 && hi < cap; ++i) {
    const double next = std::min(2.0 * hi, cap);
    if (f(next) > f(hi)) {
      hi = next;
      break;
    }
    hi = next;
  }
  const auto r = boost::math::tools::brent_find_minima(f, 0.0, hi, 52);
  ChernoffBound b;
  b.eps = eps;
  b.alpha = r.first;
  b.sigma = std::exp(r.second);
  b.lower_branch = chernoff_branch_low(d, eps, b.alpha);
  b.upper_branch = chernoff_branch_high(d, eps, b.alpha);
  return b;
}

EnvelopeCheck chernoff_envelope(const Distribution& d, double eps, const std::vector<double>& n_grid,
                                const std::vector<double>& t_grid, int reps, std::uint64_t seed, bool parallel) {
  if (reps < 1) throw InvalidInput("chernoff_envelope: reps must be >= 1");
  EnvelopeCheck out;
  out.bound = renewal_ld_sigma(d, eps);
  const double lam = d.rate();
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      const double n = n_grid[i], t = t_grid[j];
      const double T = n * t;
      std::vector<char> hit(static_cast<std::size_t>(reps), 0);
#pragma omp parallel for schedule(static) if (parallel)
      for (int r = 0; r < reps; ++r) {
        auto rng = make_stream(derive_seed(seed, "envelope/n:" + std::to_string(i) + "/t:" + std::to_string(j) +
                                                     "/rep:" + std::to_string(r)));
        double clock = d.sample(rng);
        long N = 0;
        while (clock <= T) {
          ++N;
          clock += d.sample(rng);
        }
        hit[static_cast<std::size_t>(r)] = std::abs(static_cast<double>(N) / n - lam * t) > eps * t ? 1 : 0;
      }
      long hits = 0;
      for (char h : hit) hits += h;
      EnvelopeRow row;
      row.n = n;
      row.t = t;
      row.p = static_cast<double>(hits) / reps;
      row.bound = std::pow(out.bound.sigma, T);
      row.ratio = row.p / row.bound;
      out.C = std::max(out.C, row.ratio);
      out.rows.push_back(row);
    }
  }
  return out;
}

CouplingResult coupling_tv_probe(const Network& net, const std::vector<std::int64_t>& qa,
                                 const std::vector<std::int64_t>& qb, double horizon, int reps,
                                 std::uint64_t seed, bool parallel) {
  if (reps < 1) throw InvalidInput("coupling_tv_probe: reps must be >= 1");
  if (!(horizon > 0.0)) throw InvalidInput("coupling_tv_probe: horizon must be positive");
  CouplingResult res;
  res.reps = reps;
  res.times.assign(static_cast<std::size_t>(reps), kInf);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int r = 0; r < reps; ++r) {
    if (qa == qb) {
      res.times[static_cast<std::size_t>(r)] = 0.0;
      continue;
    }
    NetworkSimulator a(net, qa, seed, r), b(net, qb, seed, r);
    auto noop = [](const SimEvent&) {};
    while (true) {
      const double ta = a.next_event_time(), tb = b.next_event_time();
      const double t = std::min(ta, tb);
      if (!(t <= horizon)) break;
      if (ta <= t) a.step(horizon, noop);
      if (tb <= t) b.step(horizon, noop);
      if (a.queue() == b.queue()) {
        res.times[static_cast<std::size_t>(r)] = t;
        break;
      }
    }
  }
  std::vector<double> sorted;
  for (double t : res.times)
    if (std::isfinite(t)) sorted.push_back(t);
  res.coupled = static_cast<int>(sorted.size());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) {
    res.note = "no couplings within the horizon; rate undefined";
    return res;
  }
  double total = 0.0;
  for (double t : sorted) total += t;
  res.mean = total / static_cast<double>(sorted.size());
  const double tmax = sorted.back();
  const int G = 25;
  for (int g = 0; g <= G; ++g) {
    const double t = tmax * g / G;
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    res.grid.push_back(t);
    res.survival.push_back(static_cast<double>(above + (reps - res.coupled)) / reps);
  }
  // tail fit: past the median, while at least 10 samples remain above t
  const double median = sorted[sorted.size() / 2];
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int used = 0;
  for (std::size_t g = 0; g < res.grid.size(); ++g) {
    if (res.grid[g] < median || res.survival[g] * reps < 10.0) continue;
    const double y = std::log(res.survival[g]);
    sw += 1;
    sx += res.grid[g];
    sy += y;
    sxx += res.grid[g] * res.grid[g];
    sxy += res.grid[g] * y;
    syy += y * y;
    ++used;
  }
  if (used < 3) {
    res.note = "too few tail points for a fit";
    return res;
  }
  const double cxx = sxx - sx * sx / sw, cxy = sxy - sx * sy / sw, cyy = syy - sy * sy / sw;
  if (!(cxx > 0.0)) {
    res.note = "degenerate tail";
    return res;
  }
  res.defined = true;
  res.rate = -cxy / cxx;
  res.r2 = cyy > 0.0 ? cxy * cxy / (cxx * cyy) : 1.0;
  return res;
}

TvResult stationary_tv_product_form(const Network& net, int truncation, double burnin, double horizon,
                                    std::uint64_t seed) {
  const auto oracle = product_form_oracle(net);
  if (truncation < 0) throw InvalidInput("stationary_tv_product_form: negative truncation");
  if (!(horizon > burnin) || burnin < 0.0) throw InvalidInput("stationary_tv_product_form: need horizon > burnin >= 0");
  std::map<std::vector<std::int64_t>, double> occ;
  double outside = 0.0;
  auto acc = [&](double a, double b, const std::vector<std::int64_t>& q) {
    a = std::max(a, burnin);
    b = std::min(b, horizon);
    if (!(b > a)) return;
    if (std::any_of(q.begin(), q.end(), [&](std::int64_t v) { return v > truncation; }))
      outside += b - a;
    else
      occ[q] += b - a;
  };
  TvResult res;
  res.truncation = truncation;
  res.events = walk_states(net, std::vector<std::int64_t>(static_cast<std::size_t>(net.K), 0), horizon, seed, acc);
  const double span = horizon - burnin;
  // enumerate the box
  double tv = 0.0, inside_oracle = 0.0;
  std::vector<std::int64_t> q(static_cast<std::size_t>(net.K), 0);
  while (true) {
    const double p = oracle.pmf(q);
    inside_oracle += p;
    auto it = occ.find(q);
    const double emp = it == occ.end() ? 0.0 : it->second / span;
    tv += std::abs(emp - p);
    std::size_t k = 0;
    while (k < q.size() && q[k] == truncation) q[k++] = 0;
    if (k == q.size()) break;
    ++q[k];
  }
  res.outside_empirical = outside / span;
  res.outside_oracle = std::max(0.0, 1.0 - inside_oracle);
  tv += std::abs(res.outside_empirical - res.outside_oracle);
  res.tv = 0.5 * tv;
  return res;
}

std::vector<OracleRow> oracle_crosscheck(const Network& net, const std::vector<Vec>& points, double rel_tol,
                                         const ActionOptions& opts) {
  const auto oracle = product_form_oracle(net);
  std::vector<OracleRow> rows;
  for (const auto& x : points) {
    OracleRow row;
    row.x = x;
    row.computed = quasipotential(net, x, opts).value;
    row.oracle = oracle.V(x);
    const double scale = std::abs(row.oracle);
    row.rel_error = scale > 0.0 ? std::abs(row.computed - row.oracle) / scale : std::abs(row.computed);
    row.pass = row.rel_error <= rel_tol;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gjn
