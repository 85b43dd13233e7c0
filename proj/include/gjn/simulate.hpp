#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gjn/network.hpp"

namespace gjn {

enum class EventKind { ExogenousArrival, Departure, RoutingTarget };

std::string to_string(EventKind k);

struct SimEvent {
  double time = 0.0;
  int station = 0;
  EventKind kind = EventKind::ExogenousArrival;
  // Departure: destination station or -1 for exit. RoutingTarget: source station.
  int peer = -1;
};

/// Event-driven realisation of the network equations: each station serves
/// its queue FIFO, consuming its service sequence only while busy; routing
/// decisions are i.i.d. per departure. Departures precede arrivals at equal
/// timestamps (then lower station index first).
///
/// Primitive streams are one mt19937_64 per (replication, station, role) with
/// seeds from derive_seed(master_seed, stream_label(...)).
class NetworkSimulator {
 public:
  NetworkSimulator(const Network& net, const std::vector<std::int64_t>& q0, std::uint64_t master_seed,
                   int replication = 0);

  double time() const { return now_; }
  const std::vector<std::int64_t>& queue() const { return q_; }
  const std::vector<double>& busy_time() const { return busy_; }
  const std::vector<std::int64_t>& arrivals() const { return arrivals_; }
  const std::vector<std::int64_t>& departures() const { return departures_; }
  /// routed(k, l) for l < K; routed(k, K) counts exits.
  std::int64_t routed(int k, int l) const { return routing_[static_cast<std::size_t>(k * (K_ + 1) + l)]; }

  /// Time of the next event (infinite when nothing is scheduled).
  double next_event_time() const;

  /// Processes the next event epoch if it falls at or before `horizon`,
  /// reporting one callback per event (a routed departure yields a Departure
  /// followed by a RoutingTarget). Otherwise advances the clock to `horizon`
  /// and returns false.
  template <class OnEvent>
  bool step(double horizon, OnEvent&& on_event);

  /// Runs to `horizon` and discards events.
  void run_until(double horizon) {
    while (step(horizon, [](const SimEvent&) {})) {
    }
  }

 private:
  void advance_clock(double t);
  void start_service(int k);

  const Network* net_;
  int K_;
  double now_ = 0.0;
  std::vector<std::int64_t> q_;
  std::vector<double> next_arrival_;
  std::vector<double> service_end_;
  std::vector<double> busy_;
  std::vector<std::int64_t> arrivals_;
  std::vector<std::int64_t> departures_;
  std::vector<std::int64_t> routing_;
  std::vector<std::mt19937_64> arrival_rng_;
  std::vector<std::mt19937_64> service_rng_;
  std::vector<std::mt19937_64> routing_rng_;
};

/// Event-level record of one realisation. `queue_after` and `busy_after` are
/// row-major (event, station) snapshots taken after each event.
struct SimTrace {
  int K = 0;
  std::uint64_t seed = 0;
  int replication = 0;
  double horizon = 0.0;
  std::vector<std::int64_t> q0;
  std::vector<SimEvent> events;
  std::vector<std::int64_t> queue_after;
  std::vector<double> busy_after;
  std::vector<std::int64_t> final_queue;
  std::vector<double> final_busy;

  std::int64_t queue(std::size_t event, int k) const { return queue_after[event * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)]; }
  /// Q(t), right-continuous.
  std::vector<std::int64_t> queue_at(double t) const;
};

SimTrace simulate_network(const Network& net, const std::vector<std::int64_t>& q0, double horizon,
                          std::uint64_t seed, int replication = 0);

/// Replays the event log with independent counters and checks
/// Q_k = Q_k(0) + A_k + sum_l R_lk(D_l) - D_k after every event.
/// Returns the index of the first violating event, or -1.
long check_conservation(const SimTrace& trace);

/// Recomputes B_k = integral of 1{Q_k > 0} from the log and compares with the
/// engine's busy-time snapshots. Returns the first mismatching event, or -1.
long check_busy_time(const SimTrace& trace, double tol = 1e-9);

struct SampledPath {
  std::vector<double> t;
  std::vector<Vec> x;
};

/// Q(n t) / n on the grid t = 0, dt, 2 dt, ... <= t_end. A negative t_end
/// means "up to the trace horizon / n"; a t_end beyond it throws.
SampledPath scaled_path(const SimTrace& trace, double n, double sample_dt, double t_end = -1.0);

struct EnsembleSummary {
  int reps = 0;
  std::uint64_t seed = 0;
  long hits = 0;
  double hit_fraction = 0.0;
  Vec mean;      // of the scaled terminal state Q(horizon) / n
  Vec variance;  // unbiased; zero for a single replication
  std::vector<Vec> terminal;
  std::vector<bool> hit;
};

using TerminalEvent = std::function<bool(const Vec&)>;

/// Independent replications (replication r uses streams labelled rep:r).
/// The reduction runs in replication order, so results do not depend on the
/// thread count; `parallel = false` is the serial reference path.
EnsembleSummary run_replications(const Network& net, const std::vector<std::int64_t>& q0, double horizon,
                                 double n, int reps, std::uint64_t seed, const TerminalEvent& event = nullptr,
                                 bool parallel = true);

// ---------------------------------------------------------------------------

template <class OnEvent>
bool NetworkSimulator::step(double horizon, OnEvent&& on_event) {
  int dep = -1;
  double t_dep = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K_; ++k) {
    if (service_end_[static_cast<std::size_t>(k)] < t_dep) {
      t_dep = service_end_[static_cast<std::size_t>(k)];
      dep = k;
    }
  }
  int arr = -1;
  double t_arr = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K_; ++k) {
    if (next_arrival_[static_cast<std::size_t>(k)] < t_arr) {
      t_arr = next_arrival_[static_cast<std::size_t>(k)];
      arr = k;
    }
  }
  const bool is_departure = dep >= 0 && t_dep <= t_arr;
  const double t = is_departure ? t_dep : t_arr;
  if (!(t <= horizon)) {
    advance_clock(horizon);
    return false;
  }
  advance_clock(t);
  if (is_departure) {
    const auto ks = static_cast<std::size_t>(dep);
    --q_[ks];
    ++departures_[ks];
    service_end_[ks] = std::numeric_limits<double>::infinity();
    const double u = std::generate_canonical<double, 53>(routing_rng_[ks]);
    int dest = -1;
    double acc = 0.0;
    for (int l = 0; l < K_; ++l) {
      acc += net_->P(dep, l);
      if (u < acc) {
        dest = l;
        break;
      }
    }
    ++routing_[ks * static_cast<std::size_t>(K_ + 1) + static_cast<std::size_t>(dest >= 0 ? dest : K_)];
    if (q_[ks] > 0) start_service(dep);
    on_event(SimEvent{t, dep, EventKind::Departure, dest});
    if (dest >= 0) {
      ++q_[static_cast<std::size_t>(dest)];
      if (service_end_[static_cast<std::size_t>(dest)] == std::numeric_limits<double>::infinity()) start_service(dest);
      on_event(SimEvent{t, dest, EventKind::RoutingTarget, dep});
    }
  } else {
    const auto ks = static_cast<std::size_t>(arr);
    ++q_[ks];
    ++arrivals_[ks];
    next_arrival_[ks] = t + net_->arrivals[ks].sample(arrival_rng_[ks]);
    if (service_end_[ks] == std::numeric_limits<double>::infinity()) start_service(arr);
    on_event(SimEvent{t, arr, EventKind::ExogenousArrival, -1});
  }
  return true;
}

}  // namespace gjn
