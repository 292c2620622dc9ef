#include <benchmark/benchmark.h>

#include "csf/diagnostics.hpp"
#include "csf/flow.hpp"
#include "csf/renorm.hpp"
#include "csf/seeds.hpp"

namespace {

csf::ResamplePolicy loose() {
  csf::ResamplePolicy p;
  p.h_max = 1e9;
  p.dtheta_max = 10.0;
  return p;
}

void BM_Step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  csf::FlowState s(csf::lemniscate_arc(1.0, n));
  const double dt = 1e-12;
  for (auto _ : state) {
    s = csf::csf_step(std::move(s), dt, loose());
    benchmark::DoNotOptimize(s.arc.back());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->Arg(120)->Arg(800)->Arg(3200);

void BM_Resample(benchmark::State& state) {
  const csf::QuarterArc arc = csf::lemniscate_arc(1.0, 800);
  csf::ResamplePolicy p;
  p.h_max = 0.01;
  p.dtheta_max = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(csf::resample_arc(arc, p).size());
}
BENCHMARK(BM_Resample);

void BM_BowtieDistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const csf::ClosedPolyline boxed =
      csf::normalize(csf::reconstruct_figure_eight(csf::lemniscate_arc(1.0, n)), csf::RenormMode{});
  for (auto _ : state) benchmark::DoNotOptimize(csf::bowtie_distance(boxed, 2e-3));
}
BENCHMARK(BM_BowtieDistance)->Arg(120)->Arg(800);

void BM_DiagRecord(benchmark::State& state) {
  const csf::FlowState s(csf::lemniscate_arc(1.0, static_cast<std::size_t>(state.range(0))));
  const double rem = csf::remaining_time(s);
  for (auto _ : state) benchmark::DoNotOptimize(csf::diag_record_remaining(s, rem).beta);
}
BENCHMARK(BM_DiagRecord)->Arg(120)->Arg(800);

}  // namespace

BENCHMARK_MAIN();
