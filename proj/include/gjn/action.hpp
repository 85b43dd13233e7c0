#pragma once

#include <vector>

#include "gjn/barrier.hpp"
#include "gjn/face.hpp"
#include "gjn/network.hpp"
#include "gjn/path.hpp"

namespace gjn {

struct ActionOptions {
  int max_segments = 3;  // M_max: longest face sequence tried
  bool parallel = true;  // fan face sequences out over OpenMP threads
  BarrierOptions barrier;
};

struct ActionResult {
  double value = 0.0;  // sum of segment_costs; +inf when no sequence is feasible
  PiecewisePath path;  // argmin
  std::vector<double> segment_costs;
  std::vector<Face> faces;
  double horizon = 0.0;        // total duration of the costed segments
  double program_value = 0.0;  // optimum of the winning convex program
  SolveStatus status = SolveStatus::Optimal;
  bool heuristic = false;      // face enumeration was restricted (K > 4)
  int sequences_tried = 0;
  int sequences_feasible = 0;
  int newton_steps = 0;
};

/// Per-segment costs duration * Psi_{J_seg}(slope), J_seg the open-segment face.
std::vector<double> path_segment_costs(const Network& net, const PiecewisePath& path);
/// I_x(q) restricted to a piecewise-linear path.
double path_cost(const Network& net, const PiecewisePath& path);

/// W_{x,t}(y): cheapest piecewise-linear path from x to y of total duration t.
ActionResult transition_cost(const Network& net, const Vec& x, const Vec& y, double t,
                             const ActionOptions& opts = {});

/// V(x): cheapest path from the origin to x over all horizons.
ActionResult quasipotential(const Network& net, const Vec& x, const ActionOptions& opts = {});

/// W_{0,t}(x) with free waiting at the origin: nonincreasing in t and equal to
/// V(x) once t passes the leveling time.
ActionResult quasipotential_horizon(const Network& net, const Vec& x, double t,
                                    const ActionOptions& opts = {});

/// Face sequences of length <= max_len over `faces`, adjacent entries distinct,
/// first face inside `first_allowed`, last inside `last_allowed`.
std::vector<std::vector<Face>> enumerate_face_sequences(const std::vector<Face>& faces, int max_len,
                                                        const Face& first_allowed,
                                                        const Face& last_allowed);

}  // namespace gjn
