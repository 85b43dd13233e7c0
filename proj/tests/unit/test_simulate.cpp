#include <doctest.h>

#include <cmath>
#include <map>

#include "gjn/errors.hpp"
#include "gjn/fluid.hpp"
#include "gjn/simulate.hpp"
#include "support.hpp"

using namespace gjn;

namespace {

double time_average(const SimTrace& tr, int k) {
  double area = 0.0, prev = 0.0;
  std::int64_t q = tr.q0[static_cast<std::size_t>(k)];
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    area += static_cast<double>(q) * (tr.events[i].time - prev);
    prev = tr.events[i].time;
    q = tr.queue(i, k);
  }
  area += static_cast<double>(q) * (tr.horizon - prev);
  return area / tr.horizon;
}

}  // namespace

TEST_CASE("empty system produces no events") {
  auto net = make_network(2, Mat::Zero(2, 2), {Distribution::none(), Distribution::none()},
                          {Distribution::exponential(1.0), Distribution::exponential(1.0)});
  auto tr = simulate_network(net, {0, 0}, 100.0, 3);
  CHECK(tr.events.empty());
  CHECK(tr.final_queue == std::vector<std::int64_t>{0, 0});
  CHECK(tr.final_busy[0] == 0.0);
}

TEST_CASE("bad inputs are rejected") {
  auto net = testnet::mm1();
  CHECK_THROWS_AS(simulate_network(net, {0}, 0.0, 1), InvalidInput);
  CHECK_THROWS_AS(simulate_network(net, {0}, -1.0, 1), InvalidInput);
  CHECK_THROWS_AS(simulate_network(net, {-1}, 1.0, 1), InvalidInput);
  CHECK_THROWS_AS(simulate_network(net, {0, 0}, 1.0, 1), InvalidInput);
}

TEST_CASE("conservation and busy-time law hold on random networks") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const int K = 1 + i % 3;
    auto net = testnet::random_network(rng, K);
    std::vector<std::int64_t> q0(static_cast<std::size_t>(K));
    for (auto& q : q0) q = static_cast<std::int64_t>(rng() % 6);
    auto tr = simulate_network(net, q0, 500.0, 100 + static_cast<std::uint64_t>(i));
    CAPTURE(i);
    CHECK(tr.events.size() > 0);
    CHECK(check_conservation(tr) == -1);
    CHECK(check_busy_time(tr) == -1);
    // busy time never exceeds elapsed time
    for (int k = 0; k < K; ++k) CHECK(tr.final_busy[static_cast<std::size_t>(k)] <= tr.horizon + 1e-9);
  }
}

TEST_CASE("conservation check detects a corrupted snapshot") {
  auto tr = simulate_network(testnet::tandem(), {2, 1}, 50.0, 5);
  REQUIRE(tr.events.size() > 10);
  tr.queue_after[5 * 2 + 1] += 1;
  CHECK(check_conservation(tr) == 5);
}

TEST_CASE("M/M/1 time-average queue length is rho/(1-rho)") {
  // lambda = 1, mu = 2: stationary mean 1
  auto tr = simulate_network(testnet::mm1(), {0}, 1e5, 2024);
  CHECK(time_average(tr, 0) == doctest::Approx(1.0).epsilon(0.05));
  // busy fraction approaches rho
  CHECK(tr.final_busy[0] / tr.horizon == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("departures precede arrivals at equal times") {
  // D(1) arrivals and D(1) services: every arrival after the first meets a departure
  auto net = make_network(1, Mat::Zero(1, 1), {Distribution::deterministic(1.0)}, {Distribution::deterministic(1.0)});
  auto tr = simulate_network(net, {0}, 3.5, 1);
  REQUIRE(tr.events.size() == 5);
  CHECK(tr.events[0].kind == EventKind::ExogenousArrival);
  CHECK(tr.events[1].time == 2.0);
  CHECK(tr.events[1].kind == EventKind::Departure);
  CHECK(tr.events[2].kind == EventKind::ExogenousArrival);
  CHECK(tr.queue(1, 0) == 0);
  CHECK(tr.queue(2, 0) == 1);
  CHECK(tr.final_queue[0] == 1);
  CHECK(tr.final_busy[0] == doctest::Approx(2.5));
}

TEST_CASE("routing frequencies match the routing matrix") {
  Mat P = Mat::Zero(3, 3);
  P(0, 1) = 0.3;
  P(0, 2) = 0.5;
  auto net = make_network(3, P, {Distribution::exponential(1.0), Distribution::none(), Distribution::none()},
                          {Distribution::exponential(2.0), Distribution::exponential(2.0), Distribution::exponential(2.0)});
  NetworkSimulator sim(net, {0, 0, 0}, 77);
  while (sim.departures()[0] < 100000) sim.step(1e12, [](const SimEvent&) {});
  const double D = static_cast<double>(sim.departures()[0]);
  const double expect[] = {0.0, 0.3, 0.5, 0.2};
  for (int l = 0; l < 4; ++l) {
    const double p = expect[l];
    const double freq = static_cast<double>(sim.routed(0, l)) / D;
    CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / D) + 1e-12);
  }
}

TEST_CASE("same seed reproduces the trace bit for bit") {
  auto net = testnet::tandem();
  auto a = simulate_network(net, {3, 0}, 200.0, 9);
  auto b = simulate_network(net, {3, 0}, 200.0, 9);
  auto c = simulate_network(net, {3, 0}, 200.0, 10);
  REQUIRE(a.events.size() == b.events.size());
  bool same = true;
  for (std::size_t i = 0; i < a.events.size(); ++i) same = same && a.events[i].time == b.events[i].time;
  CHECK(same);
  CHECK(a.queue_after == b.queue_after);
  CHECK((c.events.size() != a.events.size() || c.events[0].time != a.events[0].time));
}

TEST_CASE("queue_at is right-continuous") {
  auto tr = simulate_network(testnet::mm1(), {2}, 20.0, 4);
  REQUIRE(!tr.events.empty());
  CHECK(tr.queue_at(0.0) == tr.q0);
  const double t1 = tr.events[0].time;
  CHECK(tr.queue_at(t1)[0] == tr.queue(0, 0));
  CHECK(tr.queue_at(std::nextafter(t1, 0.0))[0] == 2);
}

TEST_CASE("scaled_path") {
  auto net = testnet::mm1();
  SUBCASE("n = 1 samples the raw path") {
    auto tr = simulate_network(net, {4}, 30.0, 8);
    auto sp = scaled_path(tr, 1.0, 0.5);
    REQUIRE(sp.t.size() == 61);
    for (std::size_t i = 0; i < sp.t.size(); ++i)
      CHECK(sp.x[i](0) == static_cast<double>(tr.queue_at(sp.t[i])[0]));
  }
  SUBCASE("sampling past the horizon throws") {
    auto tr = simulate_network(net, {4}, 30.0, 8);
    CHECK_THROWS_AS(scaled_path(tr, 10.0, 0.1, 3.5), InvalidInput);
    CHECK_THROWS_AS(scaled_path(tr, 0.5, 0.1), InvalidInput);
  }
  SUBCASE("large n follows the fluid path") {
    const double n = 2000.0;
    auto fl = integrate_fluid(net, testnet::v({1.0}));
    int inside = 0;
    for (int r = 0; r < 10; ++r) {
      auto tr = simulate_network(net, {2000}, 2.0 * n, 500 + static_cast<std::uint64_t>(r));
      auto sp = scaled_path(tr, n, 0.05);
      double dev = 0.0;
      for (std::size_t i = 0; i < sp.t.size(); ++i) dev = std::max(dev, std::abs(sp.x[i](0) - fl.path.at(sp.t[i])(0)));
      inside += dev < 0.1;
    }
    CHECK(inside >= 9);
  }
  SUBCASE("large n from empty stays near zero") {
    const double n = 1000.0;
    auto tr = simulate_network(net, {0}, 2.0 * n, 31);
    auto sp = scaled_path(tr, n, 0.01);
    double mx = 0.0;
    for (const auto& x : sp.x) mx = std::max(mx, x(0));
    CHECK(mx < 0.05);
  }
}

TEST_CASE("run_replications") {
  auto net = testnet::tandem();
  const std::vector<std::int64_t> q0{2, 1};
  SUBCASE("single replication matches a single trace") {
    auto s = run_replications(net, q0, 40.0, 1.0, 1, 17);
    auto tr = simulate_network(net, q0, 40.0, 17, 0);
    CHECK(s.mean(0) == static_cast<double>(tr.final_queue[0]));
    CHECK(s.mean(1) == static_cast<double>(tr.final_queue[1]));
    CHECK(s.variance.isZero());
  }
  SUBCASE("deterministic and thread-independent") {
    auto ev = [](const Vec& x) { return x.sum() > 0.5; };
    auto a = run_replications(net, q0, 40.0, 1.0, 200, 5, ev, true);
    auto b = run_replications(net, q0, 40.0, 1.0, 200, 5, ev, true);
    auto c = run_replications(net, q0, 40.0, 1.0, 200, 5, ev, false);
    CHECK(a.hits == b.hits);
    CHECK(a.hits == c.hits);
    CHECK(a.mean == c.mean);
    CHECK(a.variance == c.variance);
    CHECK(a.mean == b.mean);
  }
  SUBCASE("disjoint seeds give independent outcomes") {
    // 2x2 contingency of {Q_1(T) > 0} across paired replications, 1% level (df = 1)
    const int R = 2000;
    auto a = run_replications(net, {0, 0}, 30.0, 1.0, R, 101, [](const Vec& x) { return x(0) > 0; });
    auto b = run_replications(net, {0, 0}, 30.0, 1.0, R, 202, [](const Vec& x) { return x(0) > 0; });
    double n[2][2] = {{0, 0}, {0, 0}};
    for (int r = 0; r < R; ++r) n[a.hit[static_cast<std::size_t>(r)]][b.hit[static_cast<std::size_t>(r)]] += 1;
    double chi2 = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double e = (n[i][0] + n[i][1]) * (n[0][j] + n[1][j]) / R;
        chi2 += (n[i][j] - e) * (n[i][j] - e) / e;
      }
    CHECK(chi2 < 6.635);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(run_replications(net, q0, 40.0, 1.0, 0, 1), InvalidInput);
    CHECK_THROWS_AS(run_replications(net, q0, 40.0, 0.5, 3, 1), InvalidInput);
  }
}
