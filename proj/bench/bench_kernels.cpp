#include <benchmark/benchmark.h>

#include "gjn/action.hpp"
#include "gjn/simulate.hpp"

namespace {

gjn::Network tandem() {
  gjn::Mat P = gjn::Mat::Zero(2, 2);
  P(0, 1) = 1.0;
  return gjn::make_network(2, P, {gjn::Distribution::exponential(1.0), gjn::Distribution::none()},
                           {gjn::Distribution::exponential(2.0), gjn::Distribution::exponential(3.0)});
}

gjn::Network triangle() {
  gjn::Mat P(3, 3);
  P << 0.0, 0.5, 0.2, 0.1, 0.0, 0.6, 0.2, 0.1, 0.0;
  return gjn::make_network(
      3, P, {gjn::Distribution::exponential(0.5), gjn::Distribution::erlang(2, 0.6), gjn::Distribution::none()},
      {gjn::Distribution::exponential(3.0), gjn::Distribution::gamma(2.0, 6.0), gjn::Distribution::exponential(4.0)});
}

void replications(benchmark::State& st, bool parallel) {
  const auto net = tandem();
  const std::vector<std::int64_t> q0{5, 0};
  for (auto _ : st) {
    auto s = gjn::run_replications(net, q0, 200.0, 1.0, static_cast<int>(st.range(0)), 7, nullptr, parallel);
    benchmark::DoNotOptimize(s.mean);
  }
}

void BM_ReplicationsSerial(benchmark::State& st) { replications(st, false); }
void BM_ReplicationsParallel(benchmark::State& st) { replications(st, true); }
BENCHMARK(BM_ReplicationsSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicationsParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void quasipotential(benchmark::State& st, bool parallel) {
  const auto net = triangle();
  gjn::Vec x(3);
  x << 0.5, 0.3, 0.2;
  gjn::ActionOptions o;
  o.max_segments = static_cast<int>(st.range(0));
  o.parallel = parallel;
  for (auto _ : st) {
    auto r = gjn::quasipotential(net, x, o);
    benchmark::DoNotOptimize(r.value);
  }
}

void BM_SequencesSerial(benchmark::State& st) { quasipotential(st, false); }
void BM_SequencesParallel(benchmark::State& st) { quasipotential(st, true); }
BENCHMARK(BM_SequencesSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SequencesParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
