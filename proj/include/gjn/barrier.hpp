#pragma once

#include <Eigen/Dense>
#include <string>

namespace gjn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Twice-differentiable convex objective on an open domain, which must
/// contain the interior of the constraint polyhedron.
class ConvexObjective {
 public:
  virtual ~ConvexObjective() = default;
  virtual int dimension() const = 0;
  /// Returns false when x lies outside the objective's domain. `grad` and
  /// `hess` may be null when only the value is needed.
  virtual bool evaluate(const Vec& x, double& value, Vec* grad, Mat* hess) const = 0;
};

/// A x = b and G x <= h.
struct LinearConstraints {
  Mat A;
  Vec b;
  Mat G;
  Vec h;
};

struct BarrierOptions {
  double gap_abs = 1e-11;       // stop when m / tau <= gap_abs + gap_rel * |f|
  double gap_rel = 1e-9;
  double newton_tol = 1e-10;    // half squared Newton decrement
  double step_tol = 1e-12;
  double tau_factor = 10.0;
  int max_newton = 3000;
};

enum class SolveStatus { Optimal, Infeasible, MaxIterations, NumericalFailure };

std::string to_string(SolveStatus s);

struct BarrierResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Vec x;
  double value = 0.0;
  double gap = 0.0;  // m / tau at exit: suboptimality bound when Optimal
  int newton_steps = 0;
};

/// Log-barrier interior-point method for small dense problems. Equalities are
/// eliminated through a nullspace basis (so redundant rows are harmless);
/// a phase-I problem supplies a strictly feasible start.
BarrierResult barrier_minimize(const ConvexObjective& f, const LinearConstraints& cons,
                               const BarrierOptions& opts = {});

}  // namespace gjn
