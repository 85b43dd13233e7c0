#include <doctest.h>

#include <cmath>

#include "gjn/errors.hpp"
#include "gjn/verify.hpp"
#include "support.hpp"

using namespace gjn;

namespace {

// ln E exp(theta X) for Exp(rate), written out independently of the library
double exp_cumulant(double rate, double theta) { return std::log(rate / (rate - theta)); }

double grid_sigma_exp(double rate, double eps) {
  const double lam = rate;
  double best = 1e300;
  for (int i = 1; i < 200000; ++i) {
    const double a = rate * i / 200000.0;
    const double lo = (lam + eps) * (exp_cumulant(rate, -a) + a / lam) - a * eps / lam;
    const double hi = lam > eps ? (lam - eps) * (exp_cumulant(rate, a) - a / lam) - a * eps / lam : -1e300;
    best = std::min(best, std::max(lo, hi));
  }
  return std::exp(best);
}

}  // namespace

TEST_CASE("product form oracle") {
  SUBCASE("M/M/1") {
    auto o = product_form_oracle(testnet::mm1());
    CHECK(o.r(0) == doctest::Approx(0.5));
    // P(Q >= m) = 0.5^m, so -ln P(Q >= m) / m = ln 2
    CHECK(o.V(testnet::v({1.0})) == doctest::Approx(std::log(2.0)));
    double tail = 0.0;
    for (int m = 0; m < 8; ++m) tail += o.marginal(0, m);
    CHECK(1.0 - tail == doctest::Approx(std::pow(0.5, 8)));
  }
  SUBCASE("tandem") {
    auto o = product_form_oracle(testnet::tandem());
    CHECK(o.nu(0) == doctest::Approx(1.0));
    CHECK(o.nu(1) == doctest::Approx(1.0));
    CHECK(o.r(0) == doctest::Approx(0.5));
    CHECK(o.r(1) == doctest::Approx(1.0 / 3.0));
    CHECK(o.pmf({1, 2}) == doctest::Approx(0.5 * 0.5 * (2.0 / 3.0) / 9.0));
  }
  SUBCASE("unavailable") {
    CHECK_THROWS_AS(product_form_oracle(testnet::mm1(2.0, 2.0)), NetworkError);
    auto net = make_network(1, Mat::Zero(1, 1), {Distribution::erlang(2, 2.0)}, {Distribution::exponential(2.0)});
    CHECK_THROWS_AS(product_form_oracle(net), NetworkError);
  }
}

TEST_CASE("fit_decay_rate recovers an exact exponential") {
  std::vector<SlopePoint> pts;
  for (double n : {2.0, 4.0, 6.0, 8.0}) {
    SlopePoint p;
    p.n = n;
    p.trials = 100000;
    p.p = 0.7 * std::exp(-0.4 * n);
    p.hits = static_cast<long>(p.p * p.trials);
    pts.push_back(p);
  }
  auto s = fit_decay_rate(pts);
  REQUIRE(s.defined);
  CHECK(s.slope == doctest::Approx(0.4));
  CHECK(s.intercept == doctest::Approx(-std::log(0.7)));
  CHECK(s.r2 == doctest::Approx(1.0));

  for (auto& p : pts) p.hits = 0, p.p = 0.0;
  auto none = fit_decay_rate(pts);
  CHECK_FALSE(none.defined);
  CHECK(std::isinf(none.points[0].neg_log_p));
}

TEST_CASE("ldp slope at the typical point is near zero") {
  auto s = ldp_slope_estimate(testnet::mm1(), testnet::v({0.0}), {8, 16, 32}, 400, 3, {0.5, 2.0, true});
  REQUIRE(s.defined);
  CHECK(std::abs(s.slope) < 0.05);
  for (const auto& p : s.points) CHECK(p.reliable);
  CHECK_THROWS_AS(ldp_slope_estimate(testnet::mm1(), testnet::v({0.0}), {4, 2}, 10, 1), InvalidInput);
}

TEST_CASE("stationary tails") {
  auto net = testnet::mm1();
  auto tails = stationary_tail_estimate(net, {0, 2, 4}, 100.0, 40000.0, 12);
  CHECK(tails[0].p == doctest::Approx(1.0));
  CHECK(tails[1].p == doctest::Approx(0.25).epsilon(0.08));
  CHECK(tails[2].p == doctest::Approx(0.0625).epsilon(0.15));
  CHECK(tails[2].ci_low <= tails[2].p);
  CHECK(tails[2].ci_high >= tails[2].p);
  auto slope = tail_slope_estimate(tails);
  REQUIRE(slope.defined);
  CHECK(slope.slope == doctest::Approx(std::log(2.0)).epsilon(0.1));

  TailOptions joint;
  joint.mode = TailMode::Joint;
  auto jt = stationary_tail_estimate(testnet::tandem(), {1, 2}, 100.0, 60000.0, 13, joint);
  CHECK(jt[0].p == doctest::Approx(0.5 / 3.0).epsilon(0.08));
  CHECK(jt[1].p == doctest::Approx(0.25 / 9.0).epsilon(0.2));

  CHECK_THROWS_AS(stationary_tail_estimate(net, {1}, 0.0, 100.0, 1), InvalidInput);
}

TEST_CASE("renewal Chernoff sigma") {
  SUBCASE("exponential, eps = 0.5") {
    auto b = renewal_ld_sigma(Distribution::exponential(1.0), 0.5);
    CHECK(b.sigma == doctest::Approx(grid_sigma_exp(1.0, 0.5)).epsilon(1e-6));
    CHECK(b.sigma == doctest::Approx(0.8975).epsilon(1e-3));
    CHECK(b.alpha == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("other rates") {
    for (double rate : {0.5, 2.0})
      for (double eps : {0.1, 0.3})
        CHECK(renewal_ld_sigma(Distribution::exponential(rate), eps).sigma ==
              doctest::Approx(grid_sigma_exp(rate, eps)).epsilon(1e-5));
  }
  SUBCASE("large deviations are rarer") {
    const double s1 = renewal_ld_sigma(Distribution::exponential(1.0), 0.5).sigma;
    const double s2 = renewal_ld_sigma(Distribution::exponential(1.0), 5.0).sigma;
    CHECK(s2 < s1);
    CHECK(s2 > 0.0);
  }
  SUBCASE("non-exponential families stay below one") {
    CHECK(renewal_ld_sigma(Distribution::deterministic(1.0), 0.5).sigma < 1.0);
    CHECK(renewal_ld_sigma(Distribution::deterministic(1.0), 0.5).sigma > 0.0);
    CHECK(renewal_ld_sigma(Distribution::erlang(3, 3.0), 0.2).sigma < 1.0);
    CHECK(renewal_ld_sigma(Distribution::hyper_exponential({0.5, 0.5}, {1.0, 3.0}), 0.2).sigma < 1.0);
  }
  SUBCASE("eps = 0 is rejected") {
    CHECK_THROWS_AS(renewal_ld_sigma(Distribution::exponential(1.0), 0.0), InvalidInput);
  }
}

TEST_CASE("Chernoff envelope on Poisson counts") {
  auto env = chernoff_envelope(Distribution::exponential(1.0), 0.5, {5, 10}, {1}, 4000, 8);
  REQUIRE(env.rows.size() == 2);
  CHECK(env.C < 10.0);
  // P(|N(5) - 5| > 2.5) = P(N <= 2) + P(N >= 8) for Poisson(5)
  double cdf2 = 0.0, cdf7 = 0.0, term = std::exp(-5.0);
  for (int k = 0; k <= 7; ++k) {
    if (k <= 2) cdf2 += term;
    cdf7 += term;
    term *= 5.0 / (k + 1);
  }
  CHECK(env.rows[0].p == doctest::Approx(cdf2 + 1.0 - cdf7).epsilon(0.08));
}

TEST_CASE("coupling probe") {
  auto net = testnet::mm1();
  auto same = coupling_tv_probe(net, {3}, {3}, 100.0, 10, 1);
  CHECK(same.coupled == 10);
  for (double t : same.times) CHECK(t == 0.0);

  auto light = coupling_tv_probe(net, {0}, {5}, 400.0, 2000, 2);
  REQUIRE(light.defined);
  CHECK(light.r2 > 0.9);
  auto heavy = coupling_tv_probe(testnet::mm1(1.0, 1.25), {0}, {5}, 2000.0, 2000, 2);
  REQUIRE(heavy.defined);
  CHECK(heavy.rate < light.rate);
  CHECK(heavy.mean > light.mean);
}

TEST_CASE("stationary TV against product form") {
  auto tv = stationary_tv_product_form(testnet::tandem(), 20, 100.0, 50000.0, 4);
  CHECK(tv.tv < 0.03);
  CHECK(tv.outside_oracle < 1e-5);
}

TEST_CASE("oracle crosscheck on M/M/1") {
  auto rows = oracle_crosscheck(testnet::mm1(), {testnet::v({0.5}), testnet::v({2.0})}, 0.02);
  for (const auto& r : rows) CHECK(r.pass);
}
