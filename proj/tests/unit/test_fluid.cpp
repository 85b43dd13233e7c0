#include <doctest.h>

#include <random>

#include "gjn/errors.hpp"
#include "gjn/fluid.hpp"
#include "gjn/ratefn.hpp"
#include "support.hpp"

using namespace gjn;

TEST_CASE("throughput fixed point") {
  auto net = testnet::tandem();
  const Vec all = fluid_throughput(net, Face::all(2));
  CHECK(all(0) == doctest::Approx(1.0));
  CHECK(all(1) == doctest::Approx(1.0));
  const Vec none = fluid_throughput(net, Face::empty(2));
  CHECK(none(0) == doctest::Approx(2.0));
  CHECK(none(1) == doctest::Approx(3.0));
  // station 1 busy, station 2 empty: station 2 passes on its inflow
  const Vec two = fluid_throughput(net, Face::from_indices(2, {1}));
  CHECK(two(1) == doctest::Approx(2.0));
}

TEST_CASE("hand-computed drains") {
  SUBCASE("M/M/1 drains at mu - lambda") {
    auto r = integrate_fluid(testnet::mm1(), testnet::v({1.0}));
    CHECK(r.emptying_time == doctest::Approx(1.0));
    CHECK(r.path.at(0.25)(0) == doctest::Approx(0.75));
    CHECK(r.path.at(5.0)(0) == 0.0);
  }
  SUBCASE("tandem from (1, 0)") {
    auto r = integrate_fluid(testnet::tandem(), testnet::v({1.0, 0.0}));
    CHECK(r.emptying_time == doctest::Approx(1.0));
    CHECK(r.path.at(0.5)(0) == doctest::Approx(0.5));
    CHECK(r.path.at(0.5)(1) == 0.0);
  }
  SUBCASE("tandem from (0, 1)") {
    auto r = integrate_fluid(testnet::tandem(), testnet::v({0.0, 1.0}));
    CHECK(r.emptying_time == doctest::Approx(0.5));
  }
  SUBCASE("tandem from (1, 1) changes face once") {
    // station 2 drains at 3 - 2 = 1 while station 1 drains at 1
    auto r = integrate_fluid(testnet::tandem(), testnet::v({2.0, 0.5}));
    CHECK(r.emptying_time == doctest::Approx(2.0));
    CHECK(r.path.at(0.5)(1) == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("random networks: zero cost, emptying, Lyapunov descent") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 15; ++i) {
    const int K = 1 + i % 3;
    auto net = testnet::random_network(rng, K);
    Vec x0(K);
    for (int k = 0; k < K; ++k) x0(k) = U(rng) < 0.3 ? 0.0 : 2.0 * U(rng);
    if ((x0.array() == 0.0).all()) x0(0) = 1.0;
    auto r = integrate_fluid(net, x0);
    CAPTURE(i);
    CHECK(r.emptying_time <= emptying_bound(net, x0.norm()) + 1e-9);
    double prev = fluid_lyapunov(net, x0);
    for (int s = 0; s < r.path.segments(); ++s) {
      CHECK(local_rate(net, r.path.midpoint(s), r.path.slope(s)) <= 1e-6);
      const double L = fluid_lyapunov(net, r.path.positions()[static_cast<std::size_t>(s) + 1]);
      CHECK(L <= prev + 1e-12);
      prev = L;
      for (int k = 0; k < K; ++k) CHECK(r.path.positions()[static_cast<std::size_t>(s) + 1](k) >= 0.0);
    }
  }
}

TEST_CASE("fluid rejects bad input") {
  CHECK_THROWS_AS(integrate_fluid(testnet::mm1(3.0, 2.0), testnet::v({1.0})), NetworkError);
  CHECK_THROWS_AS(integrate_fluid(testnet::mm1(), testnet::v({-1.0})), InvalidInput);
  CHECK_THROWS_AS(integrate_fluid(testnet::mm1(), testnet::v({1.0, 1.0})), InvalidInput);
  auto r = integrate_fluid(testnet::mm1(), testnet::v({0.0}));
  CHECK(r.emptying_time == 0.0);
}
