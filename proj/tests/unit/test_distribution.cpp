#include <doctest.h>

#include <cmath>

#include "gjn/distribution.hpp"
#include "gjn/errors.hpp"
#include "gjn/network_io.hpp"

using namespace gjn;

namespace {

// closed-form log-MGFs written independently of the library
double lm_exp(double r, double t) { return -std::log1p(-t / r); }
double lm_erlang(int k, double r, double t) { return k * lm_exp(r, t); }
double lm_hyper(const std::vector<double>& w, const std::vector<double>& r, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * r[i] / (r[i] - t);
  return std::log(s);
}

}  // namespace

TEST_CASE("means and rates") {
  CHECK(Distribution::exponential(2.0).mean() == doctest::Approx(0.5));
  CHECK(Distribution::erlang(3, 6.0).mean() == doctest::Approx(0.5));
  CHECK(Distribution::gamma(2.5, 5.0).mean() == doctest::Approx(0.5));
  CHECK(Distribution::deterministic(0.25).rate() == doctest::Approx(4.0));
  CHECK(Distribution::hyper_exponential({0.25, 0.75}, {1.0, 3.0}).mean() == doctest::Approx(0.5));
  CHECK(Distribution::none().rate() == 0.0);
  CHECK(std::isinf(Distribution::none().mean()));
}

TEST_CASE("log mgf matches closed forms") {
  for (double t : {-3.0, -0.5, 0.0, 0.4, 1.5, 1.9}) {
    CHECK(Distribution::exponential(2.0).log_mgf(t) == doctest::Approx(lm_exp(2.0, t)));
    CHECK(Distribution::erlang(3, 2.0).log_mgf(t) == doctest::Approx(lm_erlang(3, 2.0, t)));
    CHECK(Distribution::gamma(1.5, 2.0).log_mgf(t) == doctest::Approx(-1.5 * std::log1p(-t / 2.0)));
    CHECK(Distribution::hyper_exponential({0.3, 0.7}, {2.0, 5.0}).log_mgf(t) ==
          doctest::Approx(lm_hyper({0.3, 0.7}, {2.0, 5.0}, t)));
    CHECK(Distribution::deterministic(0.7).log_mgf(t) == doctest::Approx(0.7 * t));
  }
  CHECK(Distribution::exponential(2.0).domain_sup() == 2.0);
  CHECK(Distribution::hyper_exponential({0.3, 0.7}, {2.0, 5.0}).domain_sup() == 2.0);
  CHECK(std::isinf(Distribution::deterministic(1.0).domain_sup()));
  CHECK_THROWS_AS(Distribution::exponential(2.0).log_mgf(2.0), OutsideMgfDomain);
  CHECK_THROWS_AS(Distribution::exponential(2.0).log_mgf(3.0), OutsideMgfDomain);
}

TEST_CASE("cumulant derivatives agree with finite differences") {
  const std::vector<Distribution> ds = {Distribution::exponential(1.5), Distribution::erlang(2, 3.0),
                                        Distribution::gamma(0.7, 1.0),
                                        Distribution::hyper_exponential({0.4, 0.6}, {1.0, 4.0}),
                                        Distribution::deterministic(2.0)};
  for (const auto& d : ds) {
    for (double t : {-1.0, 0.0, 0.3}) {
      const double h = 1e-5;
      const auto c = d.cumulant(t);
      CHECK(c.value == doctest::Approx(d.log_mgf(t)));
      CHECK(c.d1 == doctest::Approx((d.log_mgf(t + h) - d.log_mgf(t - h)) / (2 * h)).epsilon(1e-6));
      const double fd2 = (d.log_mgf(t + h) - 2 * d.log_mgf(t) + d.log_mgf(t - h)) / (h * h);
      CHECK(c.d2 == doctest::Approx(fd2).epsilon(1e-4).scale(1.0));
    }
    CHECK(d.cumulant(0.0).d1 == doctest::Approx(d.mean()));
  }
}

TEST_CASE("gap parametrisation agrees with theta") {
  auto d = Distribution::erlang(2, 3.0);
  for (double gap : {2.0, 0.5, 1e-3}) {
    const auto a = d.cumulant_at_gap(gap);
    const auto b = d.cumulant(3.0 - gap);
    CHECK(a.value == doctest::Approx(b.value));
    CHECK(a.d1 == doctest::Approx(b.d1));
    CHECK(a.d2 == doctest::Approx(b.d2));
  }
  // still accurate where 3 - gap rounds badly
  CHECK(d.cumulant_at_gap(1e-13).value == doctest::Approx(2.0 * std::log(3.0 / 1e-13)));
  CHECK_THROWS_AS(d.cumulant_at_gap(0.0), OutsideMgfDomain);
}

TEST_CASE("sample means") {
  std::mt19937_64 rng(5);
  const std::vector<Distribution> ds = {Distribution::exponential(1.5), Distribution::erlang(2, 3.0),
                                        Distribution::gamma(0.7, 1.0),
                                        Distribution::hyper_exponential({0.4, 0.6}, {1.0, 4.0})};
  for (const auto& d : ds) {
    const int N = 200000;
    double s = 0.0, s2 = 0.0;
    bool positive = true;
    for (int i = 0; i < N; ++i) {
      const double x = d.sample(rng);
      positive = positive && x >= 0.0;
      s += x;
      s2 += x * x;
    }
    CHECK(positive);
    const double m = s / N, var = s2 / N - m * m;
    CHECK(std::abs(m - d.mean()) < 4.0 * std::sqrt(var / N));
  }
  CHECK(Distribution::deterministic(0.3).sample(rng) == 0.3);
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(Distribution::exponential(0.0), InvalidInput);
  CHECK_THROWS_AS(Distribution::exponential(-1.0), InvalidInput);
  CHECK_THROWS_AS(Distribution::erlang(0, 1.0), InvalidInput);
  CHECK_THROWS_AS(Distribution::hyper_exponential({0.5, 0.6}, {1.0, 2.0}), InvalidInput);
  CHECK_THROWS_AS(Distribution::hyper_exponential({1.0}, {1.0, 2.0}), InvalidInput);
  CHECK_THROWS_AS(Distribution::deterministic(0.0), InvalidInput);
  CHECK_THROWS_AS(family_from_string("pareto"), InvalidInput);
}

TEST_CASE("json round trip") {
  const std::vector<Distribution> ds = {Distribution::none(), Distribution::exponential(1.5),
                                        Distribution::erlang(2, 3.0), Distribution::gamma(0.7, 1.0),
                                        Distribution::hyper_exponential({0.4, 0.6}, {1.0, 4.0}),
                                        Distribution::deterministic(2.0)};
  for (const auto& d : ds) {
    auto j = distribution_to_json(d);
    auto back = distribution_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.family() == d.family());
    CHECK(back.params() == d.params());
    CHECK(back.weights() == d.weights());
    CHECK(family_from_string(to_string(d.family())) == d.family());
  }
  CHECK_THROWS_AS(distribution_from_json(nlohmann::json::parse(R"({"family":"exponential","params":{"rate":1},"x":1})")),
                  InvalidInput);
  CHECK_THROWS_AS(distribution_from_json(nlohmann::json::parse(R"({"family":"exponential","params":{"mean":1}})")),
                  InvalidInput);
}
