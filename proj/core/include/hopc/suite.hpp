#pragma once
#include <cstdint>

#include "hopc/ilt.hpp"
#include "hopc/mbopc.hpp"

namespace hopc {

/// Everything the benchmark flow needs: one litho context plus both
/// engine configs.
struct BenchSetup {
  GridConfig grid;
  OpticsConfig optics;
  ResistConfig resist;
  IltConfig ilt;
  MbOpcConfig mbopc;

  LithoContext make_context() const { return LithoContext::make(grid, optics, resist); }
};

/// 512x512 pixels at 4 nm pitch (2048 nm window), default optics and
/// engine settings.
BenchSetup default_bench_setup();

/// Ten synthetic designs sized for the default bench window: dense
/// line/space arrays, sparse contact clusters and L/T junction mixes.
std::vector<Layout> bundled_suite();

/// Seeded generator of additional designs from the same two families
/// (even index = dense array, odd = sparse contacts); used to build
/// selector training sets.
std::vector<Layout> training_suite(int count, uint64_t seed);

}  // namespace hopc
