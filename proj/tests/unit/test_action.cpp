#include <doctest.h>

#include <cmath>

#include "gjn/action.hpp"
#include "gjn/errors.hpp"
#include "support.hpp"

using namespace gjn;

TEST_CASE("face sequence enumeration") {
  const std::vector<Face> faces = {Face::empty(2), Face::from_indices(2, {0}), Face::from_indices(2, {1})};
  auto seqs = enumerate_face_sequences(faces, 2, Face::all(2), Face::empty(2));
  // length 1: {empty}; length 2: x -> empty with x != empty (2 choices)
  CHECK(seqs.size() == 3);
  for (const auto& s : seqs) {
    CHECK(s.back() == Face::empty(2));
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] != s[i - 1]);
  }
  // unrestricted count: 3 + 3*2 + 3*2*2
  CHECK(enumerate_face_sequences(faces, 3, Face::all(2), Face::all(2)).size() == 21);
}

TEST_CASE("M/M/1 quasipotential is linear with slope ln(mu/lambda)") {
  auto net = testnet::mm1();
  for (double x : {0.5, 1.0, 2.0}) {
    auto r = quasipotential(net, testnet::v({x}));
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.value == doctest::Approx(x * std::log(2.0)).epsilon(1e-6));
    CHECK(path_cost(net, r.path) == doctest::Approx(r.value).epsilon(1e-6));
  }
  CHECK(quasipotential(net, testnet::v({0.0})).value == 0.0);
  CHECK_THROWS_AS(quasipotential(net, testnet::v({-1.0})), InvalidInput);
}

TEST_CASE("tandem quasipotential and its argmin path") {
  auto net = testnet::tandem();
  auto r = quasipotential(net, testnet::v({1.0, 1.0}));
  CHECK(r.value == doctest::Approx(std::log(6.0)).epsilon(1e-6));
  CHECK(r.path.positions().back()(0) == doctest::Approx(1.0));
  CHECK(r.path.positions().front().isZero());
  double sum = 0.0;
  for (double c : r.segment_costs) sum += c;
  CHECK(sum == doctest::Approx(r.value));
}

TEST_CASE("transition cost") {
  auto net = testnet::mm1();
  CHECK(transition_cost(net, testnet::v({1.0}), testnet::v({1.0}), 0.0).value == 0.0);
  CHECK(std::isinf(transition_cost(net, testnet::v({1.0}), testnet::v({2.0}), 0.0).value));
  // a fluid path costs nothing
  CHECK(transition_cost(net, testnet::v({1.0}), testnet::v({0.5}), 0.5).value < 1e-8);
  // the fluid cannot empty faster than mu - lambda without cost
  CHECK(transition_cost(net, testnet::v({1.0}), testnet::v({0.0}), 0.5).value > 1e-3);
}

TEST_CASE("semigroup inequality on M/M/1") {
  auto net = testnet::mm1();
  const Vec x = testnet::v({0.6}), y = testnet::v({1.2});
  const double direct = transition_cost(net, Vec::Zero(1), y, 2.0).value;
  const double split = transition_cost(net, Vec::Zero(1), x, 1.0).value + transition_cost(net, x, y, 1.0).value;
  CHECK(direct <= split + 1e-7);
}

TEST_CASE("horizon problem decreases to V") {
  auto net = testnet::mm1();
  const Vec x = testnet::v({1.0});
  const double V = quasipotential(net, x).value;
  double prev = 1e300;
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double w = quasipotential_horizon(net, x, t).value;
    CHECK(w <= prev + 1e-9);
    CHECK(w >= V - 1e-9);
    prev = w;
  }
  CHECK(prev == doctest::Approx(V).epsilon(1e-6));
}

TEST_CASE("more segments never cost more") {
  Mat P(2, 2);
  P << 0.0, 0.4, 0.3, 0.0;
  auto net = make_network(2, P, {Distribution::exponential(0.6), Distribution::erlang(2, 0.8)},
                          {Distribution::exponential(2.5), Distribution::gamma(2.0, 4.0)});
  const Vec x = testnet::v({0.4, 0.8});
  double prev = 1e300;
  for (int M = 1; M <= 3; ++M) {
    ActionOptions o;
    o.max_segments = M;
    const double v = quasipotential(net, x, o).value;
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
}

TEST_CASE("serial and parallel enumeration agree") {
  auto net = testnet::tandem();
  ActionOptions a, b;
  a.parallel = true;
  b.parallel = false;
  const Vec x = testnet::v({0.7, 0.4});
  auto ra = quasipotential(net, x, a);
  auto rb = quasipotential(net, x, b);
  CHECK(ra.value == rb.value);
  CHECK(ra.sequences_tried == rb.sequences_tried);
  CHECK(ra.faces == rb.faces);
}
