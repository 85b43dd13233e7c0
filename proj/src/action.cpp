#include "gjn/action.hpp"

#include <cmath>
#include <limits>

#include "gjn/errors.hpp"
#include "gjn/ratefn.hpp"
#include "gjn/segment_program.hpp"

namespace gjn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kFullEnumerationMaxK = 4;
constexpr double kPruneDuration = 1e-7;

void require_point(const Network& net, const Vec& x, const char* what) {
  if (x.size() != net.K) throw InvalidInput(std::string(what) + ": dimension mismatch");
  if (!x.allFinite() || (x.array() < 0.0).any()) {
    throw InvalidInput(std::string(what) + ": point must lie in the nonnegative orthant");
  }
}

// Faces available to a path program. Beyond kFullEnumerationMaxK stations,
// only faces of the cone through the straight line to `x` are tried.
std::vector<Face> candidate_faces(int K, const Vec& x, bool include_all, bool& heuristic) {
  std::vector<Face> faces;
  const Face zx = Face::of_zeros(x);
  heuristic = K > kFullEnumerationMaxK;
  const std::uint32_t all = Face::all(K).mask();
  for (std::uint32_t m = 0; m <= all; ++m) {
    const Face J(K, m);
    if (!include_all && J.is_all()) continue;
    if (heuristic && !zx.subset_of(J)) continue;
    faces.push_back(J);
  }
  return faces;
}

struct Candidate {
  std::vector<Face> faces;
  ProgramSolution sol;
};

ActionResult solve_sequences(const Network& net, const SegmentProgramSpec& base,
                             const std::vector<std::vector<Face>>& sequences, const ActionOptions& opts) {
  std::vector<Candidate> cands(sequences.size());
  const long count = static_cast<long>(sequences.size());
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (long i = 0; i < count; ++i) {
    SegmentProgramSpec spec = base;
    spec.faces = sequences[static_cast<std::size_t>(i)];
    cands[static_cast<std::size_t>(i)].faces = spec.faces;
    cands[static_cast<std::size_t>(i)].sol = solve_segment_program(net, spec, opts.barrier);
  }

  ActionResult res;
  res.sequences_tried = static_cast<int>(count);
  const Candidate* best = nullptr;
  for (const auto& c : cands) {
    res.newton_steps += c.sol.newton_steps;
    if (c.sol.status == SolveStatus::Infeasible || !std::isfinite(c.sol.value)) continue;
    ++res.sequences_feasible;
    if (!best || c.sol.value < best->sol.value) best = &c;
  }
  if (!best) {
    res.value = kInf;
    res.program_value = kInf;
    res.status = SolveStatus::Infeasible;
    return res;
  }
  res.status = best->sol.status;
  res.program_value = best->sol.value;

  // Assemble breakpoints with exact zeros where the face sequence pins them.
  const int K = net.K;
  const int M = static_cast<int>(best->faces.size());
  std::vector<double> times{0.0};
  std::vector<Vec> pos{base.start};
  Vec b = base.start;
  for (int i = 0; i < M; ++i) {
    const SegmentSolution& seg = best->sol.segments[static_cast<std::size_t>(i)];
    b += seg.displacement;
    Vec p = b;
    if (i == M - 1) {
      p = base.target;
    } else {
      for (int k = 0; k < K; ++k) {
        if (best->faces[static_cast<std::size_t>(i)].contains(k) || best->faces[static_cast<std::size_t>(i) + 1].contains(k)) p[k] = 0.0;
      }
      p = p.cwiseMax(0.0);
    }
    const double dt = seg.duration;
    if (dt < kPruneDuration && M > 1 && !(i == M - 1 && pos.size() == 1)) {
      // Drop the breakpoint of a vanishing segment; the last one keeps the target.
      if (i == M - 1) pos.back() = p;
      continue;
    }
    times.push_back(times.back() + dt);
    pos.push_back(p);
    b = p;
  }
  res.horizon = times.back();
  res.path = PiecewisePath(times, pos);
  res.segment_costs = path_segment_costs(net, res.path);
  res.value = 0.0;
  for (int s = 0; s < res.path.segments(); ++s) {
    res.value += res.segment_costs[static_cast<std::size_t>(s)];
    res.faces.push_back(res.path.segment_face(s));
  }
  return res;
}

void require_subcritical(const Network& net) {
  const ValidationReport rep = validate_network(net);
  if (!rep.pass()) throw NetworkError("quasipotential needs a valid subcritical network");
}

ActionResult origin_result(int K) {
  ActionResult r;
  r.path = PiecewisePath({0.0}, {Vec::Zero(K)});
  return r;
}

}  // namespace

std::vector<std::vector<Face>> enumerate_face_sequences(const std::vector<Face>& faces, int max_len,
                                                        const Face& first_allowed,
                                                        const Face& last_allowed) {
  std::vector<std::vector<Face>> out;
  std::vector<Face> cur;
  auto rec = [&](auto&& self) -> void {
    if (!cur.empty() && cur.back().subset_of(last_allowed)) out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    for (const Face& J : faces) {
      if (cur.empty() && !J.subset_of(first_allowed)) continue;
      if (!cur.empty() && cur.back() == J) continue;
      cur.push_back(J);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

std::vector<double> path_segment_costs(const Network& net, const PiecewisePath& path) {
  if (path.dim() != net.K) throw InvalidInput("path_cost: dimension mismatch");
  std::vector<double> costs;
  for (int s = 0; s < path.segments(); ++s) {
    const RateEval r = big_psi(net, path.segment_face(s), path.slope(s));
    costs.push_back(std::isfinite(r.value) ? path.duration(s) * r.value : kInf);
  }
  return costs;
}

double path_cost(const Network& net, const PiecewisePath& path) {
  double total = 0.0;
  for (double c : path_segment_costs(net, path)) total += c;
  return total;
}

ActionResult transition_cost(const Network& net, const Vec& x, const Vec& y, double t, const ActionOptions& opts) {
  require_point(net, x, "transition_cost");
  require_point(net, y, "transition_cost");
  if (!(t >= 0.0)) throw InvalidInput("transition_cost: t must be >= 0");
  if (opts.max_segments < 1) throw InvalidInput("transition_cost: max_segments must be >= 1");
  if (t == 0.0) {
    ActionResult r = origin_result(net.K);
    r.path = PiecewisePath({0.0}, {x});
    if (x != y) {
      r.value = kInf;
      r.status = SolveStatus::Infeasible;
    }
    return r;
  }
  bool heuristic = false;
  const std::vector<Face> faces = candidate_faces(net.K, y, true, heuristic);
  SegmentProgramSpec base;
  base.start = x;
  base.target = y;
  base.time = TimeMode::Exactly;
  base.horizon = t;
  ActionResult r = solve_sequences(
      net, base, enumerate_face_sequences(faces, opts.max_segments, Face::of_zeros(x), Face::of_zeros(y)), opts);
  r.heuristic = heuristic;
  return r;
}

ActionResult quasipotential(const Network& net, const Vec& x, const ActionOptions& opts) {
  require_point(net, x, "quasipotential");
  require_subcritical(net);
  if (opts.max_segments < 1) throw InvalidInput("quasipotential: max_segments must be >= 1");
  if ((x.array() == 0.0).all()) return origin_result(net.K);
  bool heuristic = false;
  // Waiting at the origin is free and can be cut from any path, so the
  // all-empty face never helps the free-time problem.
  const std::vector<Face> faces = candidate_faces(net.K, x, false, heuristic);
  SegmentProgramSpec base;
  base.start = Vec::Zero(net.K);
  base.target = x;
  base.time = TimeMode::Free;
  ActionResult r = solve_sequences(
      net, base, enumerate_face_sequences(faces, opts.max_segments, Face::all(net.K), Face::of_zeros(x)), opts);
  r.heuristic = heuristic;
  return r;
}

ActionResult quasipotential_horizon(const Network& net, const Vec& x, double t, const ActionOptions& opts) {
  require_point(net, x, "quasipotential_horizon");
  require_subcritical(net);
  if (!(t > 0.0)) throw InvalidInput("quasipotential_horizon: t must be > 0");
  if ((x.array() == 0.0).all()) {
    ActionResult r = origin_result(net.K);
    r.path = PiecewisePath({0.0, t}, {x, x});
    r.segment_costs = {0.0};
    r.faces = {Face::all(net.K)};
    return r;
  }
  bool heuristic = false;
  const std::vector<Face> faces = candidate_faces(net.K, x, false, heuristic);
  SegmentProgramSpec base;
  base.start = Vec::Zero(net.K);
  base.target = x;
  base.time = TimeMode::AtMost;
  base.horizon = t;
  ActionResult r = solve_sequences(
      net, base, enumerate_face_sequences(faces, opts.max_segments, Face::all(net.K), Face::of_zeros(x)), opts);
  r.heuristic = heuristic;
  const double wait = t - r.horizon;
  if (std::isfinite(r.value) && wait > kPruneDuration) {
    // Free waiting prefix at the origin fills the remaining time.
    std::vector<double> times{0.0};
    std::vector<Vec> pos{Vec::Zero(net.K)};
    for (std::size_t i = 0; i < r.path.times().size(); ++i) {
      times.push_back(r.path.times()[i] + wait);
      pos.push_back(r.path.positions()[i]);
    }
    r.path = PiecewisePath(times, pos);
    r.segment_costs.insert(r.segment_costs.begin(), 0.0);
    r.faces.insert(r.faces.begin(), Face::all(net.K));
  }
  return r;
}

}  // namespace gjn
