#include "hopc/dispatch.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace hopc {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_ratio(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

DispatchResult dispatch(const Layout& design, const SelectorModel& model,
                        const FeaturePipeline& pipeline, const BenchSetup& setup) {
  auto t0 = Clock::now();
  FeatureVector features = pipeline.extract(design);
  EngineChoice chosen = predict_engine(features, model, pipeline.fingerprint());
  DispatchResult out;
  out.chosen = chosen;
  out.predict_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  LithoContext ctx = setup.make_context();
  try {
    if (chosen == EngineChoice::ILT) {
      MaskGrid target = rasterize(design, setup.grid, RasterMode::Binary);
      out.result = run_ilt(target, setup.ilt, ctx);
    } else {
      out.result = run_mbopc(design, setup.mbopc, ctx);
    }
  } catch (const EngineError& e) {
    throw EngineError("design '" + design.name + "': " + e.what());
  }
  return out;
}

BenchReport bench_report(const std::vector<Layout>& designs, const SelectorModel* model,
                         const FeaturePipeline& pipeline, const BenchSetup& setup, BenchMode mode,
                         int jobs, bool fixed_time) {
  if (designs.empty()) throw InputError("bench_report: need at least one design");
  if (mode == BenchMode::Predicted && !model)
    throw InputError("bench_report: predicted mode requires a model");
  jobs = std::max(1, jobs);

  LithoContext ctx = setup.make_context();
  BenchReport report;
  report.mode = mode;
  report.fixed_time = fixed_time;
  report.rows.resize(designs.size());

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < designs.size(); i = next.fetch_add(1)) {
      const Layout& design = designs[i];
      BenchRow& row = report.rows[i];
      row.id = design.name;
      try {
        MaskGrid target = rasterize(design, setup.grid, RasterMode::Binary);
        OpcResult mb = run_mbopc(design, setup.mbopc, ctx);
        OpcResult ilt = run_ilt(target, setup.ilt, ctx);
        row.mse_mb = mb.mse;
        row.mse_ilt = ilt.mse;
        row.time_mb = fixed_time ? double(mb.iterations) : mb.runtime_seconds;
        row.time_ilt = fixed_time ? double(ilt.iterations) : ilt.runtime_seconds;
        row.oracle = ilt.mse < mb.mse ? EngineChoice::ILT : EngineChoice::MB_OPC;
        if (mode == BenchMode::Predicted) {
          FeatureVector f = pipeline.extract(design);
          row.chosen = predict_engine(f, *model, pipeline.fingerprint());
        } else {
          row.chosen = row.oracle;
        }
        const OpcResult& picked = row.chosen == EngineChoice::ILT ? ilt : mb;
        row.mse_hopc = picked.mse;
        row.time_hopc = fixed_time ? double(picked.iterations) : picked.runtime_seconds;
        row.correct = row.chosen == row.oracle;
      } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  size_t ok = 0;
  for (const BenchRow& row : report.rows) {
    if (row.failed) continue;
    ++ok;
    report.avg_mse_mb += row.mse_mb;
    report.avg_time_mb += row.time_mb;
    report.avg_mse_ilt += row.mse_ilt;
    report.avg_time_ilt += row.time_ilt;
    report.avg_mse_hopc += row.mse_hopc;
    report.avg_time_hopc += row.time_hopc;
  }
  if (ok == 0) throw EngineError("bench_report: every design failed");
  for (double* v : {&report.avg_mse_mb, &report.avg_time_mb, &report.avg_mse_ilt,
                    &report.avg_time_ilt, &report.avg_mse_hopc, &report.avg_time_hopc})
    *v /= double(ok);
  report.ratio_mse_mb = report.avg_mse_mb / report.avg_mse_hopc;
  report.ratio_time_mb = report.avg_time_mb / report.avg_time_hopc;
  report.ratio_mse_ilt = report.avg_mse_ilt / report.avg_mse_hopc;
  report.ratio_time_ilt = report.avg_time_ilt / report.avg_time_hopc;
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "id,mse_mb,time_mb,mse_ilt,time_ilt,mse_hopc,time_hopc,chosen,oracle,correct\n";
  for (const BenchRow& row : report.rows) {
    if (row.failed) {
      out << row.id << ",,,,,,,,,FAILED: " << row.error << "\n";
      continue;
    }
    out << row.id << "," << fmt(row.mse_mb) << "," << fmt(row.time_mb) << ","
        << fmt(row.mse_ilt) << "," << fmt(row.time_ilt) << "," << fmt(row.mse_hopc) << ","
        << fmt(row.time_hopc) << "," << to_string(row.chosen) << "," << to_string(row.oracle)
        << "," << (row.correct ? "yes" : "no") << "\n";
  }
  out << "Avg.," << fmt(report.avg_mse_mb) << "," << fmt(report.avg_time_mb) << ","
      << fmt(report.avg_mse_ilt) << "," << fmt(report.avg_time_ilt) << ","
      << fmt(report.avg_mse_hopc) << "," << fmt(report.avg_time_hopc) << ",,,\n";
  out << "Ratio," << fmt_ratio(report.ratio_mse_mb) << "," << fmt_ratio(report.ratio_time_mb)
      << "," << fmt_ratio(report.ratio_mse_ilt) << "," << fmt_ratio(report.ratio_time_ilt)
      << ",1.00,1.00,,,\n";
}

void write_mse_gap_csv(std::ostream& out, const BenchReport& report) {
  out << "id,mse_mb,mse_ilt\n";
  for (const BenchRow& row : report.rows) {
    if (row.failed) continue;
    out << row.id << "," << fmt(row.mse_mb) << "," << fmt(row.mse_ilt) << "\n";
  }
}

}  // namespace hopc
