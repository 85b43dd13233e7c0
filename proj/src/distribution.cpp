#include "gjn/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gjn/errors.hpp"

namespace gjn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::None: return "none";
    case Family::Exponential: return "exponential";
    case Family::Erlang: return "erlang";
    case Family::HyperExponential: return "hyperexponential";
    case Family::Deterministic: return "deterministic";
    case Family::Gamma: return "gamma";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::None, Family::Exponential, Family::Erlang, Family::HyperExponential,
                   Family::Deterministic, Family::Gamma}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidInput("unknown distribution family '" + name + "'");
}

Distribution::Distribution(Family f, std::vector<double> params, std::vector<double> weights)
    : family_(f), params_(std::move(params)), weights_(std::move(weights)) {}

Distribution Distribution::none() { return Distribution(Family::None, {}); }

Distribution Distribution::exponential(double rate) {
  if (rate == 0.0) {
    throw InvalidInput("zero-rate distribution: encode a station without exogenous arrivals as 'none'");
  }
  require_positive(rate, "exponential rate");
  return Distribution(Family::Exponential, {rate});
}

Distribution Distribution::erlang(int shape, double rate) {
  if (shape < 1) throw InvalidInput("erlang shape must be >= 1");
  require_positive(rate, "erlang rate");
  return Distribution(Family::Erlang, {static_cast<double>(shape), rate});
}

Distribution Distribution::hyper_exponential(std::vector<double> weights, std::vector<double> rates) {
  if (weights.empty() || weights.size() != rates.size()) {
    throw InvalidInput("hyperexponential needs equally many (>0) weights and rates");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || w > 1.0) throw InvalidInput("mixture weights must lie in [0,1]");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("mixture weights must sum to 1");
  for (double r : rates) require_positive(r, "hyperexponential rate");
  return Distribution(Family::HyperExponential, std::move(rates), std::move(weights));
}

Distribution Distribution::deterministic(double value) {
  require_positive(value, "deterministic value");
  return Distribution(Family::Deterministic, {value});
}

Distribution Distribution::gamma(double shape, double rate) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  return Distribution(Family::Gamma, {shape, rate});
}

double Distribution::mean() const {
  switch (family_) {
    case Family::None: return kInf;
    case Family::Exponential: return 1.0 / params_[0];
    case Family::Erlang:
    case Family::Gamma: return params_[0] / params_[1];
    case Family::HyperExponential: {
      double m = 0.0;
      for (std::size_t i = 0; i < params_.size(); ++i) m += weights_[i] / params_[i];
      return m;
    }
    case Family::Deterministic: return params_[0];
  }
  return kInf;
}

double Distribution::domain_sup() const {
  switch (family_) {
    case Family::None: return 0.0;
    case Family::Exponential: return params_[0];
    case Family::Erlang:
    case Family::Gamma: return params_[1];
    case Family::HyperExponential: {
      // Components with zero weight do not restrict the domain.
      double beta = kInf;
      for (std::size_t i = 0; i < params_.size(); ++i) {
        if (weights_[i] > 0.0) beta = std::min(beta, params_[i]);
      }
      return beta;
    }
    case Family::Deterministic: return kInf;
  }
  return 0.0;
}

Derivs Distribution::cumulant_at_gap(double gap) const {
  if (!(gap > 0.0)) throw OutsideMgfDomain("cumulant requested at or beyond the MGF domain");
  switch (family_) {
    case Family::Exponential: {
      return {std::log(params_[0]) - std::log(gap), 1.0 / gap, 1.0 / (gap * gap)};
    }
    case Family::Erlang:
    case Family::Gamma: {
      const double k = params_[0];
      return {k * (std::log(params_[1]) - std::log(gap)), k / gap, k / (gap * gap)};
    }
    case Family::HyperExponential: {
      const double beta = domain_sup();
      double m0 = 0.0, m1 = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < params_.size(); ++i) {
        if (weights_[i] == 0.0) continue;
        const double c = (params_[i] - beta) + gap;
        const double t = weights_[i] * params_[i] / c;
        m0 += t;
        m1 += t / c;
        m2 += 2.0 * t / (c * c);
      }
      const double d1 = m1 / m0;
      return {std::log(m0), d1, m2 / m0 - d1 * d1};
    }
    case Family::Deterministic:
    case Family::None: break;
  }
  throw InvalidInput("cumulant_at_gap needs a family with finite MGF domain");
}

Derivs Distribution::cumulant(double theta) const {
  if (is_none()) throw InvalidInput("a 'none' arrival marker has no cumulant");
  if (is_deterministic()) return {theta * params_[0], params_[0], 0.0};
  const double beta = domain_sup();
  if (!(theta < beta)) throw OutsideMgfDomain("theta outside the MGF domain");
  return cumulant_at_gap(beta - theta);
}

double Distribution::log_mgf(double theta) const { return cumulant(theta).value; }

bool Distribution::positive_density_at_zero() const {
  switch (family_) {
    case Family::Exponential:
    case Family::HyperExponential: return true;
    case Family::Erlang: return params_[0] == 1.0;
    case Family::Gamma: return params_[0] == 1.0;
    case Family::Deterministic:
    case Family::None: return false;
  }
  return false;
}

bool Distribution::unbounded_support() const {
  return family_ != Family::Deterministic && family_ != Family::None;
}

double Distribution::sample(std::mt19937_64& rng) const {
  switch (family_) {
    case Family::Exponential: return std::exponential_distribution<double>(params_[0])(rng);
    case Family::Erlang:
    case Family::Gamma:
      return std::gamma_distribution<double>(params_[0], 1.0 / params_[1])(rng);
    case Family::HyperExponential: {
      std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
      const std::size_t i = pick(rng);
      return std::exponential_distribution<double>(params_[i])(rng);
    }
    case Family::Deterministic: return params_[0];
    case Family::None: return kInf;
  }
  return kInf;
}

}  // namespace gjn
