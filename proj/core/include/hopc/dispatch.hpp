#pragma once
#include <iosfwd>

#include "hopc/selector.hpp"
#include "hopc/suite.hpp"

namespace hopc {

struct DispatchResult {
  OpcResult result;
  EngineChoice chosen = EngineChoice::MB_OPC;
  double predict_seconds = 0;
};

/// Feature extraction + model prediction, then only the chosen engine
/// runs. Prediction time is recorded separately.
DispatchResult dispatch(const Layout& design, const SelectorModel& model,
                        const FeaturePipeline& pipeline, const BenchSetup& setup);

enum class BenchMode { Predicted, Oracle, BothEngines };

struct BenchRow {
  std::string id;
  double mse_mb = 0, time_mb = 0;
  double mse_ilt = 0, time_ilt = 0;
  double mse_hopc = 0, time_hopc = 0;
  EngineChoice chosen = EngineChoice::MB_OPC;
  EngineChoice oracle = EngineChoice::MB_OPC;
  bool correct = false;
  bool failed = false;
  std::string error;
};

struct BenchReport {
  BenchMode mode = BenchMode::Oracle;
  bool fixed_time = false;  // time columns carry iteration counts
  std::vector<BenchRow> rows;
  // arithmetic means over non-failed rows
  double avg_mse_mb = 0, avg_time_mb = 0;
  double avg_mse_ilt = 0, avg_time_ilt = 0;
  double avg_mse_hopc = 0, avg_time_hopc = 0;
  // averages normalized by the H-OPC averages (H-OPC entries are 1.00)
  double ratio_mse_mb = 0, ratio_time_mb = 0;
  double ratio_mse_ilt = 0, ratio_time_ilt = 0;
};

/// Runs MB-OPC and ILT on every design (jobs-way parallel over designs)
/// and fills the H-OPC columns from the model (Predicted), the
/// per-design MSE argmin (Oracle and BothEngines). A failing engine
/// marks the row and excludes it from the averages.
BenchReport bench_report(const std::vector<Layout>& designs, const SelectorModel* model,
                         const FeaturePipeline& pipeline, const BenchSetup& setup, BenchMode mode,
                         int jobs = 1, bool fixed_time = false);

void write_bench_csv(std::ostream& out, const BenchReport& report);

/// Per-design (id, mse_mb, mse_ilt) projection of the report.
void write_mse_gap_csv(std::ostream& out, const BenchReport& report);

}  // namespace hopc
