#include "gjn/segment_program.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "gjn/errors.hpp"
#include "gjn/ratefn.hpp"

namespace gjn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse affine form sum coef * x[idx] + constant.
struct Affine {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  Affine& add(int idx, double coef) {
    terms.emplace_back(idx, coef);
    return *this;
  }
  Affine& add(const Affine& o, double scale = 1.0) {
    for (const auto& [i, c] : o.terms) terms.emplace_back(i, scale * c);
    constant += scale * o.constant;
    return *this;
  }
};

// t * phi(c / t) with phi = psi or psi(max(., cap)); time is a variable or
// a fixed constant.
struct RateTerm {
  std::vector<int> count;
  int time = -1;
  double fixed_time = 1.0;
  const Distribution* dist = nullptr;
  bool capped = false;
  double cap = 0.0;
};

// sum_j g_j ln(g_j / (p_j D)), D = sum_j g_j: the flow form of delta psi^R.
struct EntropyTerm {
  std::vector<int> idx;
  std::vector<double> p;
};

class SegmentObjective final : public ConvexObjective {
 public:
  int n = 0;
  std::vector<RateTerm> rates;
  std::vector<EntropyTerm> entropies;

  int dimension() const override { return n; }

  bool evaluate(const Vec& x, double& value, Vec* grad, Mat* hess) const override {
    value = 0.0;
    if (grad) *grad = Vec::Zero(n);
    if (hess) *hess = Mat::Zero(n, n);
    for (const auto& r : rates) {
      double c = 0.0;
      for (int i : r.count) c += x[i];
      const double t = r.time >= 0 ? x[r.time] : r.fixed_time;
      if (!(t > 0.0) || !(c > 0.0)) return false;
      const double u = c / t;
      Derivs phi{0.0, 0.0, 0.0};
      if (!r.capped || u > r.cap) phi = legendre_rate(*r.dist, u);
      if (!std::isfinite(phi.value)) return false;
      value += t * phi.value;
      if (grad) {
        for (int i : r.count) (*grad)[i] += phi.d1;
        if (r.time >= 0) (*grad)[r.time] += phi.value - u * phi.d1;
      }
      if (hess && phi.d2 != 0.0) {
        const double hcc = phi.d2 / t;
        for (int i : r.count) {
          for (int j : r.count) (*hess)(i, j) += hcc;
          if (r.time >= 0) {
            (*hess)(i, r.time) -= u * hcc;
            (*hess)(r.time, i) -= u * hcc;
          }
        }
        if (r.time >= 0) (*hess)(r.time, r.time) += u * u * hcc;
      }
    }
    for (const auto& e : entropies) {
      double D = 0.0;
      for (int i : e.idx) {
        if (!(x[i] > 0.0)) return false;
        D += x[i];
      }
      for (std::size_t j = 0; j < e.idx.size(); ++j) {
        const double g = x[e.idx[j]];
        const double lr = std::log(g / (e.p[j] * D));
        value += g * lr;
        if (grad) (*grad)[e.idx[j]] += lr;
        if (hess) {
          for (std::size_t k = 0; k < e.idx.size(); ++k) (*hess)(e.idx[j], e.idx[k]) -= 1.0 / D;
          (*hess)(e.idx[j], e.idx[j]) += 1.0 / g;
        }
      }
    }
    return std::isfinite(value);
  }
};

struct Target {
  int station;  // -1 for exit
  int var;
};

struct SegmentVars {
  int time = -1;
  std::vector<int> arrival;                  // -1 where absent
  std::vector<std::vector<Target>> targets;  // per source station
};

// Stations that can never hold or pass customers in this program: no
// exogenous input can reach them, they start empty, and every station that
// routes into them is frozen too.
std::vector<bool> frozen_stations(const Network& net, const std::vector<bool>& empty_start) {
  const std::vector<bool> reach = reachable_stations(net);
  std::vector<bool> frozen(static_cast<std::size_t>(net.K));
  for (int k = 0; k < net.K; ++k) {
    frozen[static_cast<std::size_t>(k)] = !reach[static_cast<std::size_t>(k)] && empty_start[static_cast<std::size_t>(k)];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < net.K; ++k) {
      if (!frozen[static_cast<std::size_t>(k)]) continue;
      for (int l = 0; l < net.K; ++l) {
        if (net.P(l, k) > 0.0 && !frozen[static_cast<std::size_t>(l)]) {
          frozen[static_cast<std::size_t>(k)] = false;
          changed = true;
          break;
        }
      }
    }
  }
  return frozen;
}

}  // namespace

ProgramSolution solve_segment_program(const Network& net, const SegmentProgramSpec& spec,
                                      const BarrierOptions& opts) {
  const int K = net.K;
  const int M = static_cast<int>(spec.faces.size());
  ProgramSolution out;
  if (M == 0) throw InvalidInput("segment program needs at least one segment");
  if (spec.rate_mode && (M != 1 || spec.y.size() != K)) throw InvalidInput("rate mode: one segment and y of size K");
  if (!spec.rate_mode && (spec.start.size() != K || spec.target.size() != K)) {
    throw InvalidInput("path mode: start and target of size K");
  }

  auto fail_structure = [&]() {
    out.status = SolveStatus::Infeasible;
    out.structurally_invalid = true;
    out.value = kInf;
    return out;
  };

  std::vector<bool> empty_start(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    empty_start[static_cast<std::size_t>(k)] =
        spec.rate_mode ? (spec.faces[0].contains(k) && spec.y[k] == 0.0) : spec.start[k] == 0.0;
  }
  const std::vector<bool> frozen = frozen_stations(net, empty_start);
  auto is_frozen = [&](int k) { return frozen[static_cast<std::size_t>(k)]; };

  if (!spec.rate_mode) {
    for (int k = 0; k < K; ++k) {
      if (spec.faces.front().contains(k) && spec.start[k] != 0.0) return fail_structure();
      if (spec.faces.back().contains(k) && spec.target[k] != 0.0) return fail_structure();
      if (is_frozen(k)) {
        if (spec.target[k] != 0.0) return fail_structure();
        for (const Face& J : spec.faces) {
          if (!J.contains(k)) return fail_structure();
        }
      }
    }
  }

  // Variable layout.
  SegmentObjective obj;
  std::vector<SegmentVars> vars(static_cast<std::size_t>(M));
  int n = 0;
  for (int i = 0; i < M; ++i) {
    SegmentVars& sv = vars[static_cast<std::size_t>(i)];
    if (!spec.rate_mode) sv.time = n++;
    sv.arrival.assign(static_cast<std::size_t>(K), -1);
    sv.targets.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      if (is_frozen(k)) continue;
      if (net.has_arrivals(k)) sv.arrival[static_cast<std::size_t>(k)] = n++;
      for (int l = 0; l < K; ++l) {
        if (net.P(k, l) > 0.0) sv.targets[static_cast<std::size_t>(k)].push_back({l, n++});
      }
      if (net.exit_prob(k) > 1e-15) sv.targets[static_cast<std::size_t>(k)].push_back({-1, n++});
    }
  }
  obj.n = n;

  std::vector<Affine> eqs, ineqs;  // eqs: form == 0, ineqs: form <= 0
  auto time_form = [&](const SegmentVars& sv) {
    Affine a;
    if (sv.time >= 0) a.add(sv.time, 1.0);
    else a.constant = 1.0;
    return a;
  };

  std::vector<std::vector<Affine>> displacement(static_cast<std::size_t>(M), std::vector<Affine>(static_cast<std::size_t>(K)));
  for (int i = 0; i < M; ++i) {
    const SegmentVars& sv = vars[static_cast<std::size_t>(i)];
    const Face& J = spec.faces[static_cast<std::size_t>(i)];
    if (J.K() != K) throw InvalidInput("face dimension mismatch");
    const Affine tf = time_form(sv);
    if (sv.time >= 0) ineqs.push_back(Affine().add(sv.time, -1.0).add(Affine{{}, spec.min_duration}));
    auto& disp = displacement[static_cast<std::size_t>(i)];

    for (int k = 0; k < K; ++k) {
      if (is_frozen(k)) continue;
      const auto ks = static_cast<std::size_t>(k);
      const int a = sv.arrival[ks];
      if (a >= 0) {
        disp[ks].add(a, 1.0);
        ineqs.push_back(Affine().add(a, -1.0));
        const Distribution& dist = net.arrivals[ks];
        if (dist.is_deterministic()) {
          eqs.push_back(Affine().add(a, 1.0).add(tf, -net.lambda[k]));
        } else {
          RateTerm rt;
          rt.count = {a};
          rt.time = sv.time;
          rt.dist = &dist;
          obj.rates.push_back(rt);
        }
      }
      Affine dep;
      EntropyTerm ent;
      for (const Target& tg : sv.targets[ks]) {
        dep.add(tg.var, 1.0);
        ineqs.push_back(Affine().add(tg.var, -1.0));
        ent.idx.push_back(tg.var);
        ent.p.push_back(tg.station >= 0 ? net.P(k, tg.station) : net.exit_prob(k));
        if (tg.station >= 0) disp[static_cast<std::size_t>(tg.station)].add(tg.var, 1.0);
      }
      disp[ks].add(dep, -1.0);
      obj.entropies.push_back(ent);

      const Distribution& sdist = net.services[ks];
      if (sdist.is_deterministic()) {
        Affine f = dep;
        f.add(tf, -net.mu[k]);
        if (J.contains(k)) ineqs.push_back(f);
        else eqs.push_back(f);
      } else {
        RateTerm rt;
        for (const Target& tg : sv.targets[ks]) rt.count.push_back(tg.var);
        rt.time = sv.time;
        rt.dist = &sdist;
        rt.capped = J.contains(k);
        rt.cap = net.mu[k];
        obj.rates.push_back(rt);
      }
    }
  }

  if (spec.rate_mode) {
    for (int k = 0; k < K; ++k) {
      if (is_frozen(k)) continue;
      Affine f = displacement[0][static_cast<std::size_t>(k)];
      f.constant -= spec.y[k];
      eqs.push_back(f);
    }
  } else {
    std::vector<Affine> pos(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) pos[static_cast<std::size_t>(k)].constant = spec.start[k];
    for (int i = 0; i < M; ++i) {
      for (int k = 0; k < K; ++k) {
        if (is_frozen(k)) continue;
        auto& b = pos[static_cast<std::size_t>(k)];
        b.add(displacement[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
        if (i == M - 1) {
          Affine f = b;
          f.constant -= spec.target[k];
          eqs.push_back(f);
        } else if (spec.faces[static_cast<std::size_t>(i)].contains(k) ||
                   spec.faces[static_cast<std::size_t>(i + 1)].contains(k)) {
          eqs.push_back(b);
        } else {
          ineqs.push_back(Affine().add(b, -1.0));
        }
      }
    }
    if (spec.time != TimeMode::Free) {
      Affine total;
      for (const auto& sv : vars) total.add(sv.time, 1.0);
      total.constant = -spec.horizon;
      if (spec.time == TimeMode::AtMost) ineqs.push_back(total);
      else eqs.push_back(total);
    }
  }

  LinearConstraints cons;
  cons.A = Mat::Zero(static_cast<Eigen::Index>(eqs.size()), n);
  cons.b = Vec::Zero(static_cast<Eigen::Index>(eqs.size()));
  for (std::size_t r = 0; r < eqs.size(); ++r) {
    for (const auto& [i, c] : eqs[r].terms) cons.A(static_cast<Eigen::Index>(r), i) += c;
    cons.b[static_cast<Eigen::Index>(r)] = -eqs[r].constant;
  }
  cons.G = Mat::Zero(static_cast<Eigen::Index>(ineqs.size()), n);
  cons.h = Vec::Zero(static_cast<Eigen::Index>(ineqs.size()));
  for (std::size_t r = 0; r < ineqs.size(); ++r) {
    for (const auto& [i, c] : ineqs[r].terms) cons.G(static_cast<Eigen::Index>(r), i) += c;
    cons.h[static_cast<Eigen::Index>(r)] = -ineqs[r].constant;
  }

  if (n == 0) {
    // Everything frozen: the only candidate is standing still at zero cost.
    bool ok = cons.b.size() == 0 || cons.b.cwiseAbs().maxCoeff() == 0.0;
    out.status = ok ? SolveStatus::Optimal : SolveStatus::Infeasible;
    out.value = ok ? 0.0 : kInf;
    if (ok) {
      SegmentSolution seg;
      seg.duration = spec.rate_mode ? 1.0 : spec.horizon;
      seg.arrivals = Vec::Zero(K);
      seg.departures = Vec::Zero(K);
      seg.flows = Mat::Zero(K, K);
      seg.displacement = Vec::Zero(K);
      out.segments.push_back(seg);
    }
    return out;
  }

  const BarrierResult br = barrier_minimize(obj, cons, opts);
  out.status = br.status;
  out.newton_steps = br.newton_steps;
  if (br.status == SolveStatus::Infeasible) {
    out.value = kInf;
    return out;
  }
  out.value = br.value;
  for (int i = 0; i < M; ++i) {
    const SegmentVars& sv = vars[static_cast<std::size_t>(i)];
    SegmentSolution seg;
    seg.duration = sv.time >= 0 ? br.x[sv.time] : 1.0;
    seg.arrivals = Vec::Zero(K);
    seg.departures = Vec::Zero(K);
    seg.flows = Mat::Zero(K, K);
    seg.displacement = Vec::Zero(K);
    for (int k = 0; k < K; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      if (sv.arrival[ks] >= 0) seg.arrivals[k] = br.x[sv.arrival[ks]];
      for (const Target& tg : sv.targets[ks]) {
        seg.departures[k] += br.x[tg.var];
        if (tg.station >= 0) seg.flows(k, tg.station) = br.x[tg.var];
      }
    }
    seg.displacement = seg.arrivals + seg.flows.colwise().sum().transpose() - seg.departures;
    out.segments.push_back(seg);
  }
  return out;
}

}  // namespace gjn
