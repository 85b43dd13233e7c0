#include "gjn/barrier.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace gjn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective in reduced coordinates: returns false outside the domain.
using ReducedFn = std::function<bool(const Vec&, double&, Vec*, Mat*)>;

struct Centering {
  bool ok = true;
  int steps = 0;
};

// Minimises tau * f(z) - sum log(h - G z) by damped Newton from a strictly
// feasible z. `stop` may end the loop early (phase I uses it).
Centering center(const ReducedFn& f, const Mat& G, const Vec& h, double tau, Vec& z,
                 const BarrierOptions& opts, int budget,
                 const std::function<bool(const Vec&)>& stop = nullptr) {
  Centering out;
  const Eigen::Index n = z.size();
  auto phi = [&](const Vec& zz, double& val, Vec* g, Mat* H) {
    double fv = 0.0;
    Vec fg;
    Mat fH;
    if (!f(zz, fv, g ? &fg : nullptr, H ? &fH : nullptr)) return false;
    if (!std::isfinite(fv)) return false;
    Vec slack = h - G * zz;
    if (slack.size() > 0 && !(slack.minCoeff() > 0.0)) return false;
    val = tau * fv - slack.array().log().sum();
    if (g) {
      const Vec inv = slack.cwiseInverse();
      *g = tau * fg + G.transpose() * inv;
    }
    if (H) {
      const Vec inv2 = slack.cwiseInverse().cwiseAbs2();
      *H = tau * fH + G.transpose() * inv2.asDiagonal() * G;
    }
    return true;
  };

  for (; out.steps < budget; ++out.steps) {
    double val = 0.0;
    Vec g;
    Mat H;
    if (!phi(z, val, &g, &H)) {
      out.ok = false;
      return out;
    }
    Vec dz;
    Eigen::LDLT<Mat> ldlt(H);
    bool solved = ldlt.info() == Eigen::Success && ldlt.isPositive();
    if (solved) {
      dz = -ldlt.solve(g);
      solved = dz.allFinite() && g.dot(dz) < 0.0;
    }
    if (!solved) {
      // Flat directions (e.g. a rate term frozen at zero) leave H singular.
      const double reg = 1e-10 * std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
      dz = -(H + reg * Mat::Identity(n, n)).ldlt().solve(g);
      if (!dz.allFinite() || !(g.dot(dz) < 0.0)) {
        out.ok = false;
        return out;
      }
    }
    const double decrement = -g.dot(dz);
    if (decrement / 2.0 <= opts.newton_tol) break;

    double step = 1.0;
    double trial = 0.0;
    Vec zn;
    while (true) {
      zn = z + step * dz;
      if (phi(zn, trial, nullptr, nullptr) && trial <= val - 0.25 * step * decrement) break;
      step *= 0.5;
      if (step * dz.lpNorm<Eigen::Infinity>() < opts.step_tol * (1.0 + z.lpNorm<Eigen::Infinity>())) {
        // No further progress possible at double precision.
        return out;
      }
    }
    z = zn;
    if (stop && stop(z)) {
      ++out.steps;
      return out;
    }
  }
  return out;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

BarrierResult barrier_minimize(const ConvexObjective& f, const LinearConstraints& cons,
                               const BarrierOptions& opts) {
  BarrierResult res;
  const int n = f.dimension();

  // Eliminate equalities: x = x0 + N z.
  Vec x0 = Vec::Zero(n);
  Mat N = Mat::Identity(n, n);
  if (cons.A.rows() > 0) {
    Eigen::JacobiSVD<Mat> svd(cons.A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    const double tol = 1e-11 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > tol) ++rank;
    Vec ub = svd.matrixU().transpose() * cons.b;
    Vec coeff = Vec::Zero(n);
    for (Eigen::Index i = 0; i < rank; ++i) coeff[i] = ub[i] / sv[i];
    x0 = svd.matrixV() * coeff;
    const double resid = (cons.A * x0 - cons.b).norm();
    if (resid > 1e-9 * (1.0 + cons.b.norm())) {
      res.status = SolveStatus::Infeasible;
      res.value = kInf;
      return res;
    }
    N = svd.matrixV().rightCols(n - rank);
  }
  const Eigen::Index nz = N.cols();
  const Mat Gz = cons.G.rows() > 0 ? Mat(cons.G * N) : Mat(0, nz);
  const Vec hz = cons.G.rows() > 0 ? Vec(cons.h - cons.G * x0) : Vec(0);
  const Eigen::Index m = Gz.rows();

  Vec z = Vec::Zero(nz);
  int budget = opts.max_newton;

  // Phase I: minimise s subject to Gz z - s <= hz inside a large box.
  if (m > 0 && !(hz.minCoeff() > 0.0)) {
    const double scale = std::max(1.0, hz.lpNorm<Eigen::Infinity>());
    const double box = 1e6 * scale;
    const Eigen::Index nw = nz + 1;
    Mat G1 = Mat::Zero(m + 2 * nz, nw);
    Vec h1 = Vec::Zero(m + 2 * nz);
    G1.topLeftCorner(m, nz) = Gz;
    G1.col(nz).head(m).setConstant(-1.0);
    h1.head(m) = hz;
    for (Eigen::Index i = 0; i < nz; ++i) {
      G1(m + 2 * i, i) = 1.0;
      G1(m + 2 * i + 1, i) = -1.0;
      h1[m + 2 * i] = box;
      h1[m + 2 * i + 1] = box;
    }
    Vec w = Vec::Zero(nw);
    w[nz] = (-hz).maxCoeff() + 1.0;
    ReducedFn lin = [nz](const Vec& ww, double& v, Vec* g, Mat* H) {
      v = ww[nz];
      if (g) {
        *g = Vec::Zero(ww.size());
        (*g)[nz] = 1.0;
      }
      if (H) *H = Mat::Zero(ww.size(), ww.size());
      return true;
    };
    const double m1 = static_cast<double>(G1.rows());
    double tau = 1.0 / scale;
    bool found = false;
    while (budget > 0) {
      bool feasible_now = false;
      auto stop = [&](const Vec& ww) {
        feasible_now = ww[nz] < -1e-9 * scale;
        return false;
      };
      const Centering c = center(lin, G1, h1, tau, w, opts, budget, stop);
      budget -= c.steps;
      res.newton_steps += c.steps;
      if (!c.ok) break;
      if (feasible_now || w[nz] < -1e-9 * scale) {
        found = true;
        break;
      }
      if (w[nz] - m1 / tau > 0.0 || m1 / tau < 1e-13 * scale) break;
      tau *= opts.tau_factor;
    }
    if (!found) {
      res.status = budget > 0 ? SolveStatus::Infeasible : SolveStatus::MaxIterations;
      res.value = kInf;
      return res;
    }
    z = w.head(nz);
  }

  ReducedFn obj = [&](const Vec& zz, double& v, Vec* g, Mat* H) {
    const Vec x = x0 + N * zz;
    Vec gx;
    Mat Hx;
    if (!f.evaluate(x, v, g ? &gx : nullptr, H ? &Hx : nullptr)) return false;
    if (g) *g = N.transpose() * gx;
    if (H) *H = N.transpose() * Hx * N;
    return true;
  };

  double v0 = 0.0;
  if (!obj(z, v0, nullptr, nullptr) || !std::isfinite(v0)) {
    res.status = SolveStatus::NumericalFailure;
    res.value = kInf;
    return res;
  }

  const double md = static_cast<double>(m);
  double tau = m > 0 ? std::max(1.0, md) / std::max(1.0, std::abs(v0)) : 1.0;
  res.status = SolveStatus::MaxIterations;
  while (budget > 0) {
    const Centering c = center(obj, Gz, hz, tau, z, opts, budget);
    budget -= c.steps;
    res.newton_steps += c.steps;
    if (!c.ok) {
      res.status = SolveStatus::NumericalFailure;
      break;
    }
    double v = 0.0;
    obj(z, v, nullptr, nullptr);
    res.gap = m > 0 ? md / tau : 0.0;
    if (res.gap <= opts.gap_abs + opts.gap_rel * std::abs(v)) {
      res.status = SolveStatus::Optimal;
      break;
    }
    tau *= opts.tau_factor;
  }
  res.x = x0 + N * z;
  f.evaluate(res.x, res.value, nullptr, nullptr);
  return res;
}

}  // namespace gjn
