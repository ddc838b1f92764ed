// Microbenchmarks for the hot paths: rasterization, SOCS imaging,
// gradient evaluation and feature extraction.

#include <benchmark/benchmark.h>

#include "hopc/config.hpp"

using namespace hopc;

namespace {

Layout grating(coord_t window, coord_t line, coord_t space) {
  Layout l;
  l.name = "grating";
  for (coord_t x = space; x + line + space <= window; x += line + space)
    l.polygons.push_back(Polygon::rect(x, space, x + line, window - space));
  l.recompute_bbox();
  return l;
}

LithoContext context_for(int n) {
  GridConfig grid{8, n, n};
  OpticsConfig optics;
  optics.kernel_count = 2;
  optics.kernel_weights = {0.7, 0.3};
  optics.support_radius = 20;
  return LithoContext::make(grid, optics, ResistConfig{});
}

}  // namespace

static void BM_Rasterize(benchmark::State& state) {
  int n = int(state.range(0));
  GridConfig grid{8, n, n};
  Layout l = grating(grid.extent_x(), 64, 64);
  for (auto _ : state) benchmark::DoNotOptimize(rasterize(l, grid, RasterMode::Area));
}
BENCHMARK(BM_Rasterize)->Arg(128)->Arg(512);

static void BM_AerialImage(benchmark::State& state) {
  int n = int(state.range(0));
  LithoContext ctx = context_for(n);
  Layout l = grating(ctx.grid.extent_x(), 64, 64);
  MaskGrid mask = rasterize(l, ctx.grid, RasterMode::Area);
  for (auto _ : state) benchmark::DoNotOptimize(aerial_image(mask, ctx.kernels));
}
BENCHMARK(BM_AerialImage)->Arg(128)->Arg(256)->Arg(512);

static void BM_IltGradient(benchmark::State& state) {
  int n = int(state.range(0));
  LithoContext ctx = context_for(n);
  Layout l = grating(ctx.grid.extent_x(), 64, 64);
  MaskGrid target = rasterize(l, ctx.grid, RasterMode::Binary);
  MaskParams p = MaskParams::from_target(target, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(ilt_gradient(p, target, ctx, 4.0));
}
BENCHMARK(BM_IltGradient)->Arg(128)->Arg(256);

static void BM_MbOpcIteration(benchmark::State& state) {
  LithoContext ctx = context_for(256);
  Layout l = grating(ctx.grid.extent_x(), 128, 128);
  MbOpcConfig cfg;
  cfg.max_iters = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_mbopc(l, cfg, ctx));
}
BENCHMARK(BM_MbOpcIteration);

static void BM_DctFeatures(benchmark::State& state) {
  int n = int(state.range(0));
  GridConfig grid{8, n, n};
  Layout l = grating(grid.extent_x(), 64, 64);
  MaskGrid clip = rasterize(l, grid, RasterMode::Binary);
  for (auto _ : state) benchmark::DoNotOptimize(dct_features(clip, 32, 12));
}
BENCHMARK(BM_DctFeatures)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
