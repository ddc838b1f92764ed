// End-to-end acceptance checks. Each criterion prints one line:
//   criterion NN: PASS|FAIL -- detail
// The process exits with the number of failed criteria.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "hopc/config.hpp"
#include "hopc/dispatch.hpp"

using namespace hopc;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s -- %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 4 : int(n);
}

template <class Fn>
void parallel_for(size_t count, Fn&& fn) {
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  int n = std::min<int>(jobs(), int(count));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
}

LithoContext tiny_context() {
  GridConfig grid{32, 16, 16};
  OpticsConfig optics;
  optics.kernel_count = 2;
  optics.kernel_weights = {0.7, 0.3};
  optics.support_radius = 7;
  return LithoContext::make(grid, optics, ResistConfig{});
}

// ---------------------------------------------------------------------------

void criterion_1_gradient() {
  auto t0 = Clock::now();
  LithoContext ctx = tiny_context();
  const double theta = 4.0, h = 1e-5;
  double worst = 0;
  for (uint64_t seed : {11u, 22u, 33u}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    MaskParams p;
    p.width = p.height = 16;
    p.params.resize(256);
    for (double& v : p.params) v = u(rng);
    MaskGrid target(16, 16, 32);
    for (double& v : target.values) v = rng() % 2 ? 1.0 : 0.0;

    std::vector<double> g = ilt_gradient(p, target, ctx, theta);
    for (int probe = 0; probe < 20; ++probe) {
      size_t idx = rng() % p.params.size();
      MaskParams pp = p, pm = p;
      pp.params[idx] += h;
      pm.params[idx] -= h;
      double fd = (ilt_objective(pp, target, ctx, theta) -
                   ilt_objective(pm, target, ctx, theta)) /
                  (2.0 * h);
      // the floor absorbs central-difference roundoff on near-zero entries
      worst = std::max(worst, std::abs(g[idx] - fd) / std::max(std::abs(fd), 1e-4));
    }
  }
  double secs = elapsed(t0);
  std::ostringstream d;
  d << "max relative gradient error " << worst << " (limit 1e-4), " << secs << " s (limit 5)";
  report(1, worst < 1e-4 && secs < 5.0, d.str());
}

void criterion_2_convolution() {
  auto t0 = Clock::now();
  OpticsConfig optics;
  optics.kernel_count = 2;
  optics.kernel_weights = {0.7, 0.3};
  optics.support_radius = 10;
  KernelSet ks = synthesize_kernels(optics, 16);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MaskGrid m(64, 64, 16);
  for (double& v : m.values) v = u(rng);
  AerialImage fast = aerial_image(m, ks);

  AerialImage slow;
  slow.width = slow.height = 64;
  slow.pitch = 16;
  slow.values.assign(m.values.size(), 0.0);
  for (size_t k = 0; k < ks.kernels.size(); ++k) {
    const Kernel& ker = ks.kernels[k];
    const int R = ker.radius;
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        std::complex<double> field{0, 0};
        for (int dy = -R; dy <= R; ++dy)
          for (int dx = -R; dx <= R; ++dx) {
            int sx = x - dx, sy = y - dy;
            if (sx < 0 || sy < 0 || sx >= 64 || sy >= 64) continue;
            field += m.at(sx, sy) * ker.at(dx + R, dy + R);
          }
        slow.values[size_t(y) * 64 + x] += ks.weights[k] * std::norm(field);
      }
  }

  double worst = 0;
  for (size_t i = 0; i < fast.values.size(); ++i)
    worst = std::max(worst, std::abs(fast.values[i] - slow.values[i]) /
                                std::max(std::abs(slow.values[i]), 1e-12));
  double secs = elapsed(t0);
  std::ostringstream d;
  d << "max relative intensity error " << worst << " (limit 1e-8), " << secs << " s (limit 10)";
  report(2, worst < 1e-8 && secs < 10.0, d.str());
}

// Shared heavy stage over the bundled suite.
struct SuiteRun {
  std::vector<Layout> designs;
  std::vector<OpcResult> ilt, mb;
  std::vector<DualIltOutput> dual;
  std::vector<double> baseline_mse;         // target-as-mask hard MSE
  std::vector<double> epe_initial, epe_final;
  std::vector<bool> trace_monotone;
};

SuiteRun run_suite(const BenchSetup& setup) {
  SuiteRun run;
  run.designs = bundled_suite();
  size_t n = run.designs.size();
  run.ilt.resize(n);
  run.mb.resize(n);
  run.dual.resize(n);
  run.baseline_mse.resize(n);
  run.epe_initial.resize(n);
  run.epe_final.resize(n);
  run.trace_monotone.assign(n, false);

  LithoContext ctx = setup.make_context();
  parallel_for(n, [&](size_t i) {
    const Layout& design = run.designs[i];
    MaskGrid target = rasterize(design, setup.grid, RasterMode::Binary);

    AerialImage base = aerial_image(target, ctx.kernels);
    run.baseline_mse[i] = mse(resist_threshold(base, ctx.resist, ResistMode::Hard), target);

    IltConfig icfg = setup.ilt;
    icfg.trace_path = "acceptance_trace_" + std::to_string(i) + ".csv";
    run.ilt[i] = run_ilt(target, icfg, ctx);
    {
      std::ifstream in(icfg.trace_path);
      std::string line;
      std::getline(in, line);  // header
      double prev = 1e300;
      bool mono = true;
      while (std::getline(in, line)) {
        std::istringstream is(line);
        std::string cell;
        std::getline(is, cell, ',');
        std::getline(is, cell, ',');
        double f = std::stod(cell);
        if (f > prev + 1e-12) mono = false;
        prev = f;
      }
      run.trace_monotone[i] = mono;
      std::remove(icfg.trace_path.c_str());
    }

    run.dual[i] = run_dual_ilt(target, setup.ilt, ctx);
    run.mb[i] = run_mbopc(design, setup.mbopc, ctx);

    std::vector<Fragment> frags = fragment_edges(design, setup.mbopc);
    auto max_epe = [&](const MaskGrid& mask) {
      AerialImage img = aerial_image(mask, ctx.kernels);
      PrintedImage relaxed = resist_threshold(img, ctx.resist, ResistMode::Relaxed);
      PrintedImage hard = resist_threshold(img, ctx.resist, ResistMode::Hard);
      return measure_epe(hard, &relaxed, frags, setup.grid, setup.mbopc).max_abs_epe;
    };
    run.epe_initial[i] = max_epe(rasterize(design, setup.grid, RasterMode::Area));
    run.epe_final[i] = max_epe(run.mb[i].mask);
  });
  return run;
}

void criterion_3_ilt_progress(const SuiteRun& run) {
  int improved = 0, monotone = 0;
  double worst_secs = 0;
  for (size_t i = 0; i < run.designs.size(); ++i) {
    if (run.ilt[i].mse < run.baseline_mse[i]) ++improved;
    if (run.trace_monotone[i]) ++monotone;
    worst_secs = std::max(worst_secs, run.ilt[i].runtime_seconds);
  }
  std::ostringstream d;
  d << monotone << "/10 monotone traces, " << improved
    << "/10 below the target-as-mask baseline (need >= 9), slowest design " << worst_secs
    << " s (limit 60)";
  report(3, monotone == 10 && improved >= 9 && worst_secs < 60.0, d.str());
}

void criterion_4_dual_dominance(const SuiteRun& run) {
  int dominated = 0;
  for (size_t i = 0; i < run.designs.size(); ++i)
    if (run.dual[i].result.final_objective <= run.ilt[i].final_objective + 1e-9) ++dominated;
  std::ostringstream d;
  d << dominated << "/10 designs with dual objective <= single objective (need >= 9)";
  report(4, dominated >= 9, d.str());
}

void criterion_5_mb_progress(const SuiteRun& run) {
  int improved = 0;
  std::vector<double> mb_t, ilt_t;
  for (size_t i = 0; i < run.designs.size(); ++i) {
    if (run.epe_final[i] < run.epe_initial[i]) ++improved;
    mb_t.push_back(run.mb[i].runtime_seconds);
    ilt_t.push_back(run.ilt[i].runtime_seconds);
  }
  std::sort(mb_t.begin(), mb_t.end());
  std::sort(ilt_t.begin(), ilt_t.end());
  double med_mb = (mb_t[4] + mb_t[5]) / 2.0;
  double med_ilt = (ilt_t[4] + ilt_t[5]) / 2.0;
  std::ostringstream d;
  d << improved << "/10 designs reduce worst EPE (need >= 8); median runtime MB " << med_mb
    << " s vs ILT " << med_ilt << " s";
  report(5, improved >= 8 && med_mb < med_ilt, d.str());
}

void criterion_6_oracle_identity(const SuiteRun& run, BenchReport& oracle_out,
                                 const BenchSetup& setup, const FeaturePipeline& pipeline) {
  oracle_out = bench_report(run.designs, nullptr, pipeline, setup, BenchMode::Oracle, jobs(),
                            /*fixed_time=*/true);
  bool rows_ok = true;
  for (const BenchRow& row : oracle_out.rows) {
    if (row.failed || row.mse_hopc != std::min(row.mse_mb, row.mse_ilt)) rows_ok = false;
  }
  bool ratios_ok = oracle_out.ratio_mse_mb >= 1.0 && oracle_out.ratio_mse_ilt >= 1.0;
  std::ostringstream d;
  d << "per-design argmin identity " << (rows_ok ? "holds" : "violated") << "; ratio row MB "
    << oracle_out.ratio_mse_mb << " ILT " << oracle_out.ratio_mse_ilt << " H-OPC 1.00";
  report(6, rows_ok && ratios_ok, d.str());
}

void criterion_7_predicted_dispatch(const SuiteRun& run, const BenchReport& oracle,
                                    const BenchSetup& setup, const FeaturePipeline& pipeline) {
  // Train on a generated suite labeled by running both engines.
  std::vector<Layout> train = training_suite(20, 11);
  BenchReport labels =
      bench_report(train, nullptr, pipeline, setup, BenchMode::Oracle, jobs(), true);
  std::vector<LabeledDesign> data;
  for (size_t i = 0; i < train.size(); ++i) {
    if (labels.rows[i].failed) continue;
    LabeledDesign d;
    d.id = labels.rows[i].id;
    d.features = pipeline.extract(train[i]);
    d.label = labels.rows[i].oracle;
    d.mse_mb = labels.rows[i].mse_mb;
    d.mse_ilt = labels.rows[i].mse_ilt;
    data.push_back(std::move(d));
  }

  int correct = 0;
  double overhead = -1, engine_secs = 0;
  std::string note;
  try {
    TrainConfig tcfg;
    tcfg.epochs = 300;
    tcfg.learning_rate = 0.5;
    SelectorModel model = train_selector(data, tcfg, pipeline.fingerprint());
    for (size_t i = 0; i < run.designs.size(); ++i) {
      EngineChoice predicted =
          predict_engine(pipeline.extract(run.designs[i]), model, pipeline.fingerprint());
      if (predicted == oracle.rows[i].oracle) ++correct;
    }
    DispatchResult probe = dispatch(run.designs[0], model, pipeline, setup);
    overhead = probe.predict_seconds;
    engine_secs = probe.result.runtime_seconds;
  } catch (const Error& e) {
    note = std::string("; training failed: ") + e.what();
  }
  bool overhead_ok = overhead >= 0 && overhead < 0.01 * engine_secs;
  std::ostringstream d;
  d << correct << "/10 held-out designs match the oracle engine (need >= 8); prediction "
    << overhead << " s vs engine " << engine_secs << " s" << note;
  report(7, correct >= 8 && overhead_ok, d.str());
}

void criterion_8_so_mcmi() {
  int agree = 0;
  // mutual-information-shaped ensemble: near-additive with interaction noise
  for (uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double rel[10];
    for (double& x : rel) x = u(rng);
    CircleStats M;
    M.n = 10;
    M.m.assign(100, 0.0);
    for (int i = 0; i < 10; ++i)
      for (int j = i; j < 10; ++j) M.at(i, j) = M.at(j, i) = rel[i] + rel[j] + 0.2 * g(rng);
    CircleSelection exact = select_circles(M, 4);
    CircleSelection greedy = select_circles(M, 4, /*force_greedy=*/true);
    if (std::abs(greedy.value - exact.value) < 1e-9) ++agree;
  }
  std::ostringstream d;
  d << agree << "/100 random matrices where greedy+swap equals the exhaustive optimum (need >= 95)";
  report(8, agree >= 95, d.str());
}

void criterion_9_squish() {
  auto t0 = Clock::now();
  int mismatches = 0, cases = 0;
  for (int n = 1; n <= 4; ++n) {
    std::vector<coord_t> delta(size_t(n), 1);
    while (true) {
      for (int d = n; d <= 12; ++d) {
        std::vector<int> s = squish_scale(delta, d);
        double greedy_obj = 0;
        for (int i = 0; i < n; ++i) greedy_obj = std::max(greedy_obj, double(delta[i]) / s[i]);

        double best = 1e300;
        std::vector<int> comp(size_t(n), 1);
        auto sweep = [&](auto&& self, int idx, int left) -> void {
          if (idx == n - 1) {
            comp[idx] = left;
            double obj = 0;
            for (int i = 0; i < n; ++i) obj = std::max(obj, double(delta[i]) / comp[i]);
            best = std::min(best, obj);
            return;
          }
          for (int v = 1; v <= left - (n - 1 - idx); ++v) {
            comp[idx] = v;
            self(self, idx + 1, left - v);
          }
        };
        sweep(sweep, 0, d);
        ++cases;
        if (std::abs(greedy_obj - best) > 1e-12) ++mismatches;
      }
      int i = n - 1;
      while (i >= 0 && delta[i] == 9) {
        delta[i] = 1;
        --i;
      }
      if (i < 0) break;
      ++delta[i];
    }
  }
  double secs = elapsed(t0);
  std::ostringstream d;
  d << mismatches << " mismatches over " << cases << " cases, " << secs << " s (limit 30)";
  report(9, mismatches == 0 && secs < 30.0, d.str());
}

void criterion_10_closed_forms() {
  bool ok = bbl_bias(0.0, 8.0) == 0.5 && bbl_bias(0.0, 77.0) == 0.5;
  ok = ok && bbl_bias(0.301, 8.0) == 0.0 && bbl_bias(4.0, 8.0) == 0.0;
  ok = ok && auc_pairwise_loss({0.7}, {0.7}, PhiKind::SquaredHinge) == 1.0;
  std::vector<double> pos{0.3, -0.4, 1.2}, neg{0.1, 0.9};
  for (PhiKind phi : {PhiKind::Logistic, PhiKind::SquaredHinge}) {
    double base = auc_pairwise_loss(pos, neg, phi);
    std::vector<double> ps = pos, ns = neg;
    for (double& x : ps) x += 41.5;
    for (double& x : ns) x += 41.5;
    if (std::abs(auc_pairwise_loss(ps, ns, phi) - base) > 1e-12) ok = false;
  }
  report(10, ok, "bbl_bias fixed points, squared-hinge pair loss and AUC shift invariance");
}

void criterion_11_determinism() {
  // Same window (2048 nm) at half resolution keeps the double run affordable.
  BenchSetup setup = default_bench_setup();
  setup.grid = GridConfig{8, 256, 256};
  FeaturePipeline pipeline{setup.grid, 12, 32};
  std::vector<Layout> designs = bundled_suite();
  std::ostringstream a, b;
  write_bench_csv(a, bench_report(designs, nullptr, pipeline, setup, BenchMode::Oracle, jobs(),
                                  /*fixed_time=*/true));
  write_bench_csv(b, bench_report(designs, nullptr, pipeline, setup, BenchMode::Oracle, jobs(),
                                  /*fixed_time=*/true));
  bool same = a.str() == b.str();
  std::ostringstream d;
  d << "two fixed-time bench runs produced " << (same ? "byte-identical" : "different") << " CSV ("
    << a.str().size() << " bytes)";
  report(11, same, d.str());
}

}  // namespace

int main() {
  criterion_1_gradient();
  criterion_2_convolution();

  BenchSetup setup = default_bench_setup();
  FeaturePipeline pipeline{setup.grid, 12, 32};
  std::printf("running both engines over the bundled suite (this is the slow part)...\n");
  std::fflush(stdout);
  SuiteRun run = run_suite(setup);

  criterion_3_ilt_progress(run);
  criterion_4_dual_dominance(run);
  criterion_5_mb_progress(run);
  BenchReport oracle;
  criterion_6_oracle_identity(run, oracle, setup, pipeline);
  criterion_7_predicted_dispatch(run, oracle, setup, pipeline);
  criterion_8_so_mcmi();
  criterion_9_squish();
  criterion_10_closed_forms();
  criterion_11_determinism();

  std::printf("%d of 11 criteria failed\n", g_failures);
  return g_failures;
}
