#include <benchmark/benchmark.h>

#include "mwrn/analytics.hpp"
#include "mwrn/experiment.hpp"
#include "mwrn/protocol.hpp"

using namespace mwrn;

namespace {

SimConfig bench_config(Protocol proto, ChannelModel chan) {
  SimConfig cfg;
  cfg.users = 10;
  cfg.bits_per_frame = 1000;
  cfg.protocol = proto;
  cfg.channel = chan;
  cfg.snr_grid_db = {8.0};
  cfg.seed = 17;
  return cfg;
}

void BM_GaussianStream(benchmark::State& state) {
  channel::RandomStream rs(1, {0, 0, channel::Role::kMacNoise, 0});
  for (auto _ : state) benchmark::DoNotOptimize(rs.next_gaussian());
}
BENCHMARK(BM_GaussianStream);

void BM_TwrnBaselines(benchmark::State& state) {
  double rho = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        analytics::twrn_baselines(analytics::link_parameters_from_rho(rho)));
    rho += 1e-9;
  }
}
BENCHMARK(BM_TwrnBaselines);

void BM_SimulateFrame(benchmark::State& state) {
  const auto proto = state.range(0) ? Protocol::kAf : Protocol::kDf;
  const auto chan = state.range(1) ? ChannelModel::kRayleigh : ChannelModel::kAwgn;
  const SimConfig cfg = bench_config(proto, chan);
  std::uint64_t trial = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(protocol::simulate_frame(cfg, 8.0, trial++));
  state.SetItemsProcessed(state.iterations() * cfg.bits_per_frame * (cfg.users - 1));
}
BENCHMARK(BM_SimulateFrame)->ArgsProduct({{0, 1}, {0, 1}})
    ->ArgNames({"af", "rayleigh"});

void BM_EnumerationOracle(benchmark::State& state) {
  const int users = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(experiment::df_enumeration_oracle(users, 0.1, 1));
}
BENCHMARK(BM_EnumerationOracle)->Arg(10)->Arg(14);

void BM_FadingAverageBer(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        analytics::fading_average_ber(10, 316.0, Protocol::kAf, 100000, 3));
}
BENCHMARK(BM_FadingAverageBer);

} // namespace

BENCHMARK_MAIN();
