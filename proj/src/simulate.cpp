#include "gjn/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "gjn/errors.hpp"
#include "gjn/seeds.hpp"

namespace gjn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::ExogenousArrival: return "arrival";
    case EventKind::Departure: return "departure";
    case EventKind::RoutingTarget: return "routed";
  }
  return "?";
}

NetworkSimulator::NetworkSimulator(const Network& net, const std::vector<std::int64_t>& q0,
                                   std::uint64_t master_seed, int replication)
    : net_(&net), K_(net.K) {
  if (static_cast<int>(q0.size()) != K_) throw InvalidInput("simulate: q0 has wrong dimension");
  for (auto v : q0)
    if (v < 0) throw InvalidInput("simulate: q0 must be nonnegative");
  const auto K = static_cast<std::size_t>(K_);
  q_ = q0;
  next_arrival_.assign(K, kInf);
  service_end_.assign(K, kInf);
  busy_.assign(K, 0.0);
  arrivals_.assign(K, 0);
  departures_.assign(K, 0);
  routing_.assign(K * (K + 1), 0);
  for (int k = 0; k < K_; ++k) {
    arrival_rng_.push_back(make_stream(derive_seed(master_seed, stream_label(replication, k, "arrival"))));
    service_rng_.push_back(make_stream(derive_seed(master_seed, stream_label(replication, k, "service"))));
    routing_rng_.push_back(make_stream(derive_seed(master_seed, stream_label(replication, k, "routing"))));
  }
  for (int k = 0; k < K_; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    if (net.has_arrivals(k)) next_arrival_[ks] = net.arrivals[ks].sample(arrival_rng_[ks]);
    if (q_[ks] > 0) start_service(k);
  }
}

double NetworkSimulator::next_event_time() const {
  double t = kInf;
  for (int k = 0; k < K_; ++k) {
    t = std::min(t, next_arrival_[static_cast<std::size_t>(k)]);
    t = std::min(t, service_end_[static_cast<std::size_t>(k)]);
  }
  return t;
}

void NetworkSimulator::advance_clock(double t) {
  if (t < now_) return;
  const double dt = t - now_;
  for (int k = 0; k < K_; ++k)
    if (q_[static_cast<std::size_t>(k)] > 0) busy_[static_cast<std::size_t>(k)] += dt;
  now_ = t;
}

void NetworkSimulator::start_service(int k) {
  const auto ks = static_cast<std::size_t>(k);
  service_end_[ks] = now_ + net_->services[ks].sample(service_rng_[ks]);
}

std::vector<std::int64_t> SimTrace::queue_at(double t) const {
  // last event with time <= t
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double v, const SimEvent& e) { return v < e.time; });
  if (it == events.begin()) return q0;
  const auto i = static_cast<std::size_t>(it - events.begin()) - 1;
  const auto K_ = static_cast<std::size_t>(K);
  return std::vector<std::int64_t>(queue_after.begin() + static_cast<long>(i * K_),
                                   queue_after.begin() + static_cast<long>((i + 1) * K_));
}

SimTrace simulate_network(const Network& net, const std::vector<std::int64_t>& q0, double horizon,
                          std::uint64_t seed, int replication) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidInput("simulate: horizon must be positive and finite");
  NetworkSimulator sim(net, q0, seed, replication);
  SimTrace tr;
  tr.K = net.K;
  tr.seed = seed;
  tr.replication = replication;
  tr.horizon = horizon;
  tr.q0 = q0;
  auto record = [&](const SimEvent& e) {
    tr.events.push_back(e);
    tr.queue_after.insert(tr.queue_after.end(), sim.queue().begin(), sim.queue().end());
    tr.busy_after.insert(tr.busy_after.end(), sim.busy_time().begin(), sim.busy_time().end());
  };
  while (sim.step(horizon, record)) {
  }
  tr.final_queue = sim.queue();
  tr.final_busy = sim.busy_time();
  return tr;
}

long check_conservation(const SimTrace& tr) {
  const auto K = static_cast<std::size_t>(tr.K);
  std::vector<std::int64_t> A(K, 0), D(K, 0), Rin(K, 0);
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    const auto& e = tr.events[i];
    const auto k = static_cast<std::size_t>(e.station);
    switch (e.kind) {
      case EventKind::ExogenousArrival: ++A[k]; break;
      case EventKind::Departure: ++D[k]; break;
      case EventKind::RoutingTarget: ++Rin[k]; break;
    }
    for (std::size_t j = 0; j < K; ++j) {
      const std::int64_t expect = tr.q0[j] + A[j] + Rin[j] - D[j];
      if (expect != tr.queue(i, static_cast<int>(j)) || expect < 0) return static_cast<long>(i);
    }
  }
  return -1;
}

long check_busy_time(const SimTrace& tr, double tol) {
  const auto K = static_cast<std::size_t>(tr.K);
  std::vector<double> B(K, 0.0);
  std::vector<std::int64_t> q = tr.q0;
  double t = 0.0;
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    const double dt = tr.events[i].time - t;
    if (dt < 0.0) return static_cast<long>(i);
    for (std::size_t j = 0; j < K; ++j) {
      if (q[j] > 0) B[j] += dt;
      if (std::abs(B[j] - tr.busy_after[i * K + j]) > tol * std::max(1.0, B[j])) return static_cast<long>(i);
      q[j] = tr.queue(i, static_cast<int>(j));
    }
    t = tr.events[i].time;
  }
  return -1;
}

SampledPath scaled_path(const SimTrace& tr, double n, double sample_dt, double t_end) {
  if (!(n >= 1.0)) throw InvalidInput("scaled_path: n must be >= 1");
  if (!(sample_dt > 0.0)) throw InvalidInput("scaled_path: sample_dt must be positive");
  const double limit = tr.horizon / n;
  if (t_end < 0.0) t_end = limit;
  if (t_end > limit * (1.0 + 1e-12)) throw InvalidInput("scaled_path: sampling beyond the trace horizon");
  SampledPath out;
  const auto steps = static_cast<long>(std::floor(t_end / sample_dt + 1e-9));
  for (long i = 0; i <= steps; ++i) {
    const double t = std::min(static_cast<double>(i) * sample_dt, t_end);
    const auto q = tr.queue_at(n * t);
    Vec x(tr.K);
    for (int k = 0; k < tr.K; ++k) x(k) = static_cast<double>(q[static_cast<std::size_t>(k)]) / n;
    out.t.push_back(t);
    out.x.push_back(std::move(x));
  }
  return out;
}

EnsembleSummary run_replications(const Network& net, const std::vector<std::int64_t>& q0, double horizon,
                                 double n, int reps, std::uint64_t seed, const TerminalEvent& event,
                                 bool parallel) {
  if (reps < 1) throw InvalidInput("run_replications: reps must be >= 1");
  if (!(n >= 1.0)) throw InvalidInput("run_replications: n must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidInput("run_replications: horizon must be positive");
  EnsembleSummary s;
  s.reps = reps;
  s.seed = seed;
  s.terminal.assign(static_cast<std::size_t>(reps), Vec());
  s.hit.assign(static_cast<std::size_t>(reps), false);
  std::vector<char> hit(static_cast<std::size_t>(reps), 0);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int r = 0; r < reps; ++r) {
    NetworkSimulator sim(net, q0, seed, r);
    sim.run_until(horizon);
    Vec x(net.K);
    for (int k = 0; k < net.K; ++k) x(k) = static_cast<double>(sim.queue()[static_cast<std::size_t>(k)]) / n;
    if (event) hit[static_cast<std::size_t>(r)] = event(x) ? 1 : 0;
    s.terminal[static_cast<std::size_t>(r)] = std::move(x);
  }

  s.mean = Vec::Zero(net.K);
  s.variance = Vec::Zero(net.K);
  for (int r = 0; r < reps; ++r) {
    s.hit[static_cast<std::size_t>(r)] = hit[static_cast<std::size_t>(r)] != 0;
    s.hits += hit[static_cast<std::size_t>(r)];
    s.mean += s.terminal[static_cast<std::size_t>(r)];
  }
  s.mean /= reps;
  if (reps > 1) {
    for (int r = 0; r < reps; ++r) s.variance += (s.terminal[static_cast<std::size_t>(r)] - s.mean).array().square().matrix();
    s.variance /= (reps - 1);
  }
  s.hit_fraction = static_cast<double>(s.hits) / reps;
  return s;
}

}  // namespace gjn
