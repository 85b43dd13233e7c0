#pragma once

#include <random>

#include "gjn/network.hpp"

namespace testnet {

inline gjn::Network mm1(double lam = 1.0, double mu = 2.0) {
  return gjn::make_network(1, gjn::Mat::Zero(1, 1), {gjn::Distribution::exponential(lam)},
                           {gjn::Distribution::exponential(mu)});
}

inline gjn::Network tandem(double lam = 1.0, double mu1 = 2.0, double mu2 = 3.0) {
  gjn::Mat P = gjn::Mat::Zero(2, 2);
  P(0, 1) = 1.0;
  return gjn::make_network(2, P, {gjn::Distribution::exponential(lam), gjn::Distribution::none()},
                           {gjn::Distribution::exponential(mu1), gjn::Distribution::exponential(mu2)});
}

inline gjn::Vec v(std::initializer_list<double> xs) {
  gjn::Vec out(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

inline gjn::Distribution random_law(std::mt19937_64& rng, double rate) {
  std::uniform_int_distribution<int> fam(0, 3);
  switch (fam(rng)) {
    case 0: return gjn::Distribution::exponential(rate);
    case 1: {
      const int k = std::uniform_int_distribution<int>(2, 4)(rng);
      return gjn::Distribution::erlang(k, k * rate);
    }
    case 2: {
      const double a = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
      return gjn::Distribution::gamma(a, a * rate);
    }
    default: {
      // two-phase mixture with the requested mean
      const double w = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
      const double r1 = rate * std::uniform_real_distribution<double>(1.2, 3.0)(rng);
      const double m2 = (1.0 / rate - w / r1) / (1.0 - w);
      return gjn::Distribution::hyper_exponential({w, 1.0 - w}, {r1, 1.0 / m2});
    }
  }
}

/// Random subcritical network with K stations (utilisations in [0.2, 0.8]).
inline gjn::Network random_network(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  while (true) {
    gjn::Mat P = gjn::Mat::Zero(K, K);
    for (int k = 0; k < K; ++k) {
      const double keep = 0.7 * U(rng);
      double tot = 0.0;
      gjn::Vec row = gjn::Vec::Zero(K);
      for (int l = 0; l < K; ++l)
        if (l != k && U(rng) < 0.7) row(l) = U(rng), tot += row(l);
      if (tot > 0) P.row(k) = (keep * row / tot).transpose();
    }
    std::vector<gjn::Distribution> arr, srv;
    gjn::Vec lam = gjn::Vec::Zero(K);
    for (int k = 0; k < K; ++k) {
      if (k == 0 || U(rng) < 0.6) {
        lam(k) = 0.3 + U(rng);
        arr.push_back(random_law(rng, lam(k)));
      } else {
        arr.push_back(gjn::Distribution::none());
      }
    }
    const gjn::Vec nu = (gjn::Mat::Identity(K, K) - P.transpose()).lu().solve(lam);
    bool ok = true;
    for (int k = 0; k < K; ++k) {
      const double rho = 0.2 + 0.6 * U(rng);
      const double mu = nu(k) > 1e-9 ? nu(k) / rho : 1.0 + U(rng);
      if (!(mu > 0) || !std::isfinite(mu)) ok = false;
      srv.push_back(random_law(rng, mu));
    }
    if (!ok) continue;
    auto net = gjn::make_network(K, P, arr, srv);
    // the mixture construction may be skipped by make_network rounding; recheck
    bool sub = true;
    const gjn::Vec nu2 = (gjn::Mat::Identity(K, K) - P.transpose()).lu().solve(net.lambda);
    for (int k = 0; k < K; ++k) sub = sub && nu2(k) < net.mu(k);
    if (sub) return net;
  }
}

}  // namespace testnet
