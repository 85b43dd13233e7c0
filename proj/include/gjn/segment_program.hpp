#pragma once

#include <vector>

#include "gjn/barrier.hpp"
#include "gjn/face.hpp"
#include "gjn/network.hpp"

namespace gjn {

/// How segment durations enter a path program.
enum class TimeMode { Free, AtMost, Exactly };

/// A chain of linear segments, segment i confined to the closure of face J_i,
/// posed as one convex program in count variables: per segment the duration
/// t_i, arrival counts a_l = t_i alpha_l and flow counts g_kl = t_i delta_k rho_kl
/// (exit included). Each segment costs the perspective t_i psi_{J_i}(./t_i),
/// which is jointly convex, so a fixed face sequence has a global optimum.
///
/// Rate mode is the one-segment, unit-duration case with prescribed
/// displacement y and no positivity on positions: its value is Psi_J(y).
struct SegmentProgramSpec {
  std::vector<Face> faces;
  bool rate_mode = false;
  Vec y;       // rate mode displacement
  Vec start;   // path mode
  Vec target;  // path mode
  TimeMode time = TimeMode::Free;
  double horizon = 0.0;
  double min_duration = 1e-9;
};

struct SegmentSolution {
  double duration = 0.0;
  Vec arrivals;    // counts a_l over the segment
  Vec departures;  // counts d_k
  Mat flows;       // counts g_kl between stations
  Vec displacement;
};

struct ProgramSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double value = 0.0;
  bool structurally_invalid = false;  // face sequence incompatible with endpoints
  std::vector<SegmentSolution> segments;
  int newton_steps = 0;
};

ProgramSolution solve_segment_program(const Network& net, const SegmentProgramSpec& spec,
                                      const BarrierOptions& opts = {});

}  // namespace gjn
