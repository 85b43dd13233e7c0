#pragma once

#include <random>
#include <string>
#include <vector>

namespace gjn {

enum class Family { None, Exponential, Erlang, HyperExponential, Deterministic, Gamma };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Value and first two derivatives of a scalar function.
struct Derivs {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Positive interarrival or service time law with a closed-form cumulant.
///
/// `None` marks a station without exogenous arrivals; it has no cumulant and
/// reports rate 0. All other families have strictly positive support.
class Distribution {
 public:
  Distribution() = default;

  static Distribution none();
  static Distribution exponential(double rate);
  static Distribution erlang(int shape, double rate);
  static Distribution hyper_exponential(std::vector<double> weights, std::vector<double> rates);
  static Distribution deterministic(double value);
  static Distribution gamma(double shape, double rate);

  Family family() const { return family_; }
  bool is_none() const { return family_ == Family::None; }
  bool is_deterministic() const { return family_ == Family::Deterministic; }

  /// Mean time between events (infinite for None).
  double mean() const;
  /// Events per unit time, 1/mean (0 for None).
  double rate() const { return is_none() ? 0.0 : 1.0 / mean(); }

  /// sup{θ : E exp(θX) < ∞}; +∞ for Deterministic.
  double domain_sup() const;

  /// ln E exp(θX). Throws OutsideMgfDomain when θ >= domain_sup().
  double log_mgf(double theta) const;

  /// Cumulant and its θ-derivatives at θ = domain_sup() - gap, gap > 0.
  /// Parametrising by the gap keeps precision as θ approaches the boundary.
  /// Only valid for families with finite domain_sup().
  Derivs cumulant_at_gap(double gap) const;

  /// Cumulant and derivatives at θ (any family other than None).
  Derivs cumulant(double theta) const;

  /// Audit flags for the soft (assumption) checks of validate_network.
  bool positive_density_at_zero() const;
  bool unbounded_support() const;

  double sample(std::mt19937_64& rng) const;

  /// Shape/rate/value parameters as stored; layout depends on the family.
  const std::vector<double>& params() const { return params_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  Distribution(Family f, std::vector<double> params, std::vector<double> weights = {});

  Family family_ = Family::None;
  // Exponential: {rate}; Erlang/Gamma: {shape, rate}; Deterministic: {value};
  // HyperExponential: rates, with weights_ holding the mixture weights.
  std::vector<double> params_;
  std::vector<double> weights_;
};

}  // namespace gjn
