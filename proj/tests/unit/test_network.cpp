#include <doctest.h>

#include <cmath>

#include "gjn/errors.hpp"
#include "gjn/network_io.hpp"
#include "support.hpp"

using namespace gjn;

namespace {

const ValidationCheck& check(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

// largest real root of det(sI - P) for 3x3 P by bisection on the explicit cubic
double spectral_radius_3x3(const Mat& P) {
  auto charpoly = [&](double s) { return (s * Mat::Identity(3, 3) - P).determinant(); };
  double lo = 0.0, hi = P.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  // Perron root is the largest real root; charpoly > 0 beyond it
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    bool beyond = true;
    for (int j = 0; j <= 50; ++j) beyond = beyond && charpoly(mid + (hi - mid) * j / 50.0) > 0.0;
    (beyond ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

TEST_CASE("spectral radius") {
  Mat P(2, 2);
  P << 0.0, 0.5, 0.5, 0.0;
  // s^2 - 0.25 = 0
  CHECK(spectral_radius(P) == doctest::Approx(0.5).epsilon(1e-10));
  Mat Q(3, 3);
  Q << 0.1, 0.4, 0.2, 0.3, 0.0, 0.5, 0.2, 0.2, 0.1;
  CHECK(spectral_radius(Q) == doctest::Approx(spectral_radius_3x3(Q)).epsilon(1e-8));
  CHECK(spectral_radius(Mat::Zero(3, 3)) == doctest::Approx(0.0));
  // nilpotent: power iteration cannot settle on a direction
  Mat N = Mat::Zero(3, 3);
  N(0, 1) = 1.0;
  N(1, 2) = 1.0;
  CHECK(spectral_radius(N) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("traffic equations") {
  auto t = traffic_intensity(testnet::tandem());
  CHECK(t.nu(0) == doctest::Approx(1.0));
  CHECK(t.nu(1) == doctest::Approx(1.0));
  CHECK(t.utilization(1) == doctest::Approx(1.0 / 3.0));

  // feedback: nu = lambda / (1 - p)
  Mat P(1, 1);
  P << 0.25;
  auto fb = make_network(1, P, {Distribution::exponential(1.5)}, {Distribution::exponential(4.0)});
  CHECK(traffic_intensity(fb).nu(0) == doctest::Approx(2.0));
  CHECK(fb.exit_prob(0) == doctest::Approx(0.75));

  Mat closed(2, 2);
  closed << 0.0, 1.0, 1.0, 0.0;
  auto cl = make_network(2, closed, {Distribution::exponential(1.0), Distribution::none()},
                         {Distribution::exponential(2.0), Distribution::exponential(2.0)});
  CHECK_THROWS_AS(traffic_intensity(cl), NetworkError);
  CHECK_FALSE(validate_network(cl).pass());
}

TEST_CASE("validation") {
  SUBCASE("M/M/1 passes cleanly") {
    auto r = validate_network(testnet::mm1());
    CHECK(r.pass());
    CHECK(r.subcritical());
    CHECK(r.warnings().empty());
  }
  SUBCASE("supercritical is a hard failure") {
    auto r = validate_network(testnet::mm1(3.0, 2.0));
    CHECK_FALSE(r.pass());
    CHECK_FALSE(check(r, "subcritical").pass);
    CHECK(validate_network(testnet::mm1(2.0, 2.0)).pass() == false);
  }
  SUBCASE("rows summing above one") {
    Mat P(2, 2);
    P << 0.6, 0.6, 0.0, 0.0;
    auto net = make_network(2, P, {Distribution::exponential(0.1), Distribution::none()},
                            {Distribution::exponential(5.0), Distribution::exponential(5.0)});
    auto r = validate_network(net);
    CHECK_FALSE(r.pass());
    CHECK_FALSE(check(r, "substochastic").pass);
  }
  SUBCASE("soft assumption checks only warn") {
    auto net = make_network(1, Mat::Zero(1, 1), {Distribution::erlang(2, 2.0)}, {Distribution::deterministic(0.25)});
    auto r = validate_network(net);
    CHECK(r.pass());
    CHECK_FALSE(r.warnings().empty());
    CHECK_FALSE(check(r, "right_derivative_at_zero").pass);
    CHECK(check(r, "unbounded_interarrival_support").pass);
    auto det = make_network(1, Mat::Zero(1, 1), {Distribution::deterministic(1.0)}, {Distribution::exponential(2.0)});
    CHECK_FALSE(check(validate_network(det), "unbounded_interarrival_support").pass);
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(make_network(0, Mat(), {}, {}), InvalidInput);
  CHECK_THROWS_AS(make_network(2, Mat::Zero(1, 1), {Distribution::none()}, {Distribution::exponential(1.0)}),
                  InvalidInput);
  Mat neg(1, 1);
  neg << -0.1;
  CHECK_THROWS_AS(make_network(1, neg, {Distribution::none()}, {Distribution::exponential(1.0)}), InvalidInput);
  CHECK_THROWS_AS(make_network(1, Mat::Zero(1, 1), {Distribution::exponential(1.0)}, {Distribution::none()}),
                  InvalidInput);
}

TEST_CASE("reachable stations") {
  Mat P = Mat::Zero(3, 3);
  P(0, 1) = 0.5;
  auto net = make_network(3, P, {Distribution::exponential(1.0), Distribution::none(), Distribution::none()},
                          {Distribution::exponential(2.0), Distribution::exponential(2.0), Distribution::exponential(2.0)});
  auto r = reachable_stations(net);
  CHECK(r == std::vector<bool>{true, true, false});
}

TEST_CASE("spec json") {
  const auto text = R"({"schema_version":1,"K":2,"P":[0,1,0,0],
    "arrivals":[{"family":"exponential","params":{"rate":1}},{"family":"none"}],
    "services":[{"family":"exponential","params":{"rate":2}},{"family":"erlang","params":{"shape":2,"rate":6}}]})";
  auto net = network_from_json(nlohmann::json::parse(text));
  CHECK(net.K == 2);
  CHECK(net.P(0, 1) == 1.0);
  CHECK(net.mu(1) == doctest::Approx(3.0));
  auto again = network_from_json(nlohmann::json::parse(network_to_json(net).dump()));
  CHECK(again.P == net.P);
  CHECK(network_to_json(again).dump() == network_to_json(net).dump());

  auto j = nlohmann::json::parse(text);
  j["extra"] = 1;
  CHECK_THROWS_AS(network_from_json(j), InvalidInput);
  j = nlohmann::json::parse(text);
  j["P"] = {0, 1, 0};
  CHECK_THROWS_AS(network_from_json(j), InvalidInput);
  j = nlohmann::json::parse(text);
  j["schema_version"] = 2;
  CHECK_THROWS_AS(network_from_json(j), InvalidInput);
  CHECK_THROWS_AS(load_network("/nonexistent/spec.json"), InvalidInput);
}
