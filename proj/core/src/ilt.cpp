#include "hopc/ilt.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>

namespace hopc {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double z) { return std::log(z / (1.0 - z)); }

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Relaxed print of one exposure plus its intensity-space pullback.
struct Exposure {
  std::vector<double> mask;  // sigmoid(theta * p)
  ConvEngine::Forward fwd;
  std::vector<double> z;  // relaxed resist output
};

Exposure expose(ConvEngine& eng, const std::vector<double>& params, double theta,
                const ResistConfig& rc) {
  Exposure e;
  e.mask.resize(params.size());
  for (size_t i = 0; i < params.size(); ++i) e.mask[i] = sigmoid(theta * params[i]);
  e.fwd = eng.forward(e.mask);
  e.z.resize(e.mask.size());
  for (size_t i = 0; i < e.z.size(); ++i)
    e.z[i] = sigmoid(rc.steepness * (e.fwd.intensity[i] - rc.threshold));
  return e;
}

// grad_z -> grad_params for one exposure.
std::vector<double> pullback(ConvEngine& eng, const Exposure& e, std::vector<double> grad_z,
                             const std::vector<double>& params, double theta,
                             const ResistConfig& rc) {
  for (size_t i = 0; i < grad_z.size(); ++i)
    grad_z[i] *= rc.steepness * e.z[i] * (1.0 - e.z[i]);  // dz/dI
  std::vector<double> grad_mask = eng.adjoint(e.fwd, grad_z);
  for (size_t i = 0; i < grad_mask.size(); ++i)
    grad_mask[i] *= theta * e.mask[i] * (1.0 - e.mask[i]);  // dmask/dparams
  return grad_mask;
}

// Memoizes the most recent exposure: the descent loop evaluates the gradient
// at the point the line search just accepted, so the forward pass repeats.
struct ExposureCache {
  std::vector<double> key;
  Exposure e;
  bool valid = false;

  const Exposure& get(ConvEngine& eng, const std::vector<double>& params, double theta,
                      const ResistConfig& rc) {
    if (!valid || key != params) {
      e = expose(eng, params, theta, rc);
      key = params;
      valid = true;
    }
    return e;
  }
};

// F(params) with optional gradient; shared shape for single and dual runs.
using EvalFn = std::function<double(const std::vector<double>&, std::vector<double>*)>;

struct DescentOutcome {
  std::vector<double> params;
  double objective = 0;
  int iterations = 0;
};

DescentOutcome descend(std::vector<double> p, const EvalFn& eval, const IltConfig& cfg,
                       Clock::time_point t0) {
  std::ofstream trace;
  if (!cfg.trace_path.empty()) {
    trace.open(cfg.trace_path);
    trace << "iteration,objective,step,seconds\n";
  }

  std::vector<double> grad;
  double f = eval(p, &grad);
  if (!std::isfinite(f)) throw EngineError("ilt: objective not finite at initialization");
  if (trace.is_open()) trace << 0 << "," << f << "," << 0.0 << "," << seconds_since(t0) << "\n";

  DescentOutcome out;
  out.iterations = 0;
  std::vector<double> cand(p.size());
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    double step = cfg.step_size;
    double f_new = 0;
    bool accepted = false;
    const int tries = cfg.line_search ? 11 : 1;  // initial step plus 10 halvings
    for (int t = 0; t < tries; ++t) {
      for (size_t i = 0; i < p.size(); ++i) cand[i] = p[i] - step * grad[i];
      f_new = eval(cand, nullptr);
      if (std::isnan(f_new))
        throw EngineError("ilt: objective diverged (NaN) at iteration " + std::to_string(iter));
      if (!cfg.line_search || f_new <= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no improving step left

    p.swap(cand);
    double f_prev = f;
    f = f_new;
    out.iterations = iter;
    if (trace.is_open())
      trace << iter << "," << f << "," << step << "," << seconds_since(t0) << "\n";
    if (cfg.line_search && (f_prev - f) <= cfg.stop_tol * std::max(f_prev, 1e-30)) break;
    if (iter < cfg.max_iters) f = eval(p, &grad);
  }
  out.params = std::move(p);
  out.objective = f;
  return out;
}

MaskGrid binarize(const std::vector<double>& mask, int w, int h, coord_t pitch) {
  MaskGrid g(w, h, pitch);
  for (size_t i = 0; i < mask.size(); ++i) g.values[i] = mask[i] >= 0.5 ? 1.0 : 0.0;
  return g;
}

PrintedImage hard_print(ConvEngine& eng, const MaskGrid& mask, const LithoContext& ctx) {
  ConvEngine::Forward fwd = eng.forward(mask.values);
  AerialImage img{mask.width, mask.height, mask.pitch, std::move(fwd.intensity)};
  return resist_threshold(img, ctx.resist, ResistMode::Hard);
}

}  // namespace

MaskGrid MaskParams::mask(double steepness, coord_t pitch) const {
  MaskGrid g(width, height, pitch);
  for (size_t i = 0; i < params.size(); ++i) g.values[i] = sigmoid(steepness * params[i]);
  return g;
}

MaskParams MaskParams::from_target(const MaskGrid& target, double steepness, double lo) {
  MaskParams p;
  p.width = target.width;
  p.height = target.height;
  p.params.resize(target.values.size());
  for (size_t i = 0; i < p.params.size(); ++i) {
    double z = std::clamp(target.values[i], lo, 1.0 - lo);
    p.params[i] = logit(z) / steepness;
  }
  return p;
}

MaskParams MaskParams::constant(int w, int h, double mask_value, double steepness) {
  MaskParams p;
  p.width = w;
  p.height = h;
  p.params.assign(size_t(w) * h, logit(mask_value) / steepness);
  return p;
}

double ilt_objective(const MaskParams& p, const MaskGrid& target, const LithoContext& ctx,
                     double mask_steepness) {
  ConvEngine eng(p.width, p.height, ctx.kernels);
  Exposure e = expose(eng, p.params, mask_steepness, ctx.resist);
  double f = 0;
  for (size_t i = 0; i < e.z.size(); ++i) {
    double d = e.z[i] - target.values[i];
    f += d * d;
  }
  return f;
}

std::vector<double> ilt_gradient(const MaskParams& p, const MaskGrid& target,
                                 const LithoContext& ctx, double mask_steepness) {
  ConvEngine eng(p.width, p.height, ctx.kernels);
  Exposure e = expose(eng, p.params, mask_steepness, ctx.resist);
  std::vector<double> grad_z(e.z.size());
  for (size_t i = 0; i < e.z.size(); ++i) grad_z[i] = 2.0 * (e.z[i] - target.values[i]);
  return pullback(eng, e, std::move(grad_z), p.params, mask_steepness, ctx.resist);
}

OpcResult run_ilt(const MaskGrid& target, const IltConfig& cfg, const LithoContext& ctx) {
  cfg.validate();
  auto t0 = Clock::now();
  ConvEngine eng(target.width, target.height, ctx.kernels);
  const double theta = cfg.mask_steepness;

  ExposureCache cache;
  EvalFn eval = [&](const std::vector<double>& params, std::vector<double>* grad) {
    const Exposure& e = cache.get(eng, params, theta, ctx.resist);
    double f = 0;
    std::vector<double> grad_z(e.z.size());
    for (size_t i = 0; i < e.z.size(); ++i) {
      double d = e.z[i] - target.values[i];
      f += d * d;
      grad_z[i] = 2.0 * d;
    }
    if (grad) *grad = pullback(eng, e, std::move(grad_z), params, theta, ctx.resist);
    return f;
  };

  MaskParams p0 = MaskParams::from_target(target, theta);
  DescentOutcome dc = descend(std::move(p0.params), eval, cfg, t0);

  OpcResult res;
  std::vector<double> relaxed(dc.params.size());
  for (size_t i = 0; i < relaxed.size(); ++i) relaxed[i] = sigmoid(theta * dc.params[i]);
  res.mask = binarize(relaxed, target.width, target.height, target.pitch);
  res.printed = hard_print(eng, res.mask, ctx);
  res.mse = mse(res.printed, target);
  res.final_objective = dc.objective;
  res.iterations = dc.iterations;
  res.engine = "ILT";
  res.runtime_seconds = seconds_since(t0);
  return res;
}

DualIltOutput run_dual_ilt(const MaskGrid& target, const IltConfig& cfg, const LithoContext& ctx) {
  cfg.validate();
  auto t0 = Clock::now();
  ConvEngine eng(target.width, target.height, ctx.kernels);
  const double theta = cfg.mask_steepness;
  const size_t n = target.values.size();

  ExposureCache cache_a, cache_b;
  EvalFn eval = [&](const std::vector<double>& params, std::vector<double>* grad) {
    std::vector<double> pa(params.begin(), params.begin() + n);
    std::vector<double> pb(params.begin() + n, params.end());
    const Exposure& ea = cache_a.get(eng, pa, theta, ctx.resist);
    const Exposure& eb = cache_b.get(eng, pb, theta, ctx.resist);
    double f = 0;
    std::vector<double> ga(n), gb(n);
    for (size_t i = 0; i < n; ++i) {
      double z = 1.0 - (1.0 - ea.z[i]) * (1.0 - eb.z[i]);
      double d = z - target.values[i];
      f += d * d;
      ga[i] = 2.0 * d * (1.0 - eb.z[i]);
      gb[i] = 2.0 * d * (1.0 - ea.z[i]);
    }
    if (grad) {
      std::vector<double> gpa = pullback(eng, ea, std::move(ga), pa, theta, ctx.resist);
      std::vector<double> gpb = pullback(eng, eb, std::move(gb), pb, theta, ctx.resist);
      grad->resize(2 * n);
      std::copy(gpa.begin(), gpa.end(), grad->begin());
      std::copy(gpb.begin(), gpb.end(), grad->begin() + n);
    }
    return f;
  };

  // Phase 1 optimizes exposure A alone along the exact single-mask
  // trajectory; phase 2 continues jointly with a dark exposure B. The
  // joint search therefore starts at the single-mask optimum, and the
  // line search keeps every accepted step at least as good.
  EvalFn eval_single = [&](const std::vector<double>& params, std::vector<double>* grad) {
    const Exposure& e = cache_a.get(eng, params, theta, ctx.resist);
    double f = 0;
    std::vector<double> grad_z(e.z.size());
    for (size_t i = 0; i < e.z.size(); ++i) {
      double d = e.z[i] - target.values[i];
      f += d * d;
      grad_z[i] = 2.0 * d;
    }
    if (grad) *grad = pullback(eng, e, std::move(grad_z), params, theta, ctx.resist);
    return f;
  };
  MaskParams pa0 = MaskParams::from_target(target, theta);
  IltConfig phase1 = cfg;
  phase1.trace_path.clear();
  DescentOutcome warm = descend(std::move(pa0.params), eval_single, phase1, t0);

  MaskParams pb0 = MaskParams::constant(target.width, target.height, 0.05, theta);
  std::vector<double> p0;
  p0.reserve(2 * n);
  p0.insert(p0.end(), warm.params.begin(), warm.params.end());
  p0.insert(p0.end(), pb0.params.begin(), pb0.params.end());

  DescentOutcome dc = descend(std::move(p0), eval, cfg, t0);
  dc.iterations += warm.iterations;

  DualIltOutput out;
  std::vector<double> ma(n), mb(n);
  for (size_t i = 0; i < n; ++i) {
    ma[i] = sigmoid(theta * dc.params[i]);
    mb[i] = sigmoid(theta * dc.params[n + i]);
  }
  out.mask_a = binarize(ma, target.width, target.height, target.pitch);
  out.mask_b = binarize(mb, target.width, target.height, target.pitch);

  PrintedImage za = hard_print(eng, out.mask_a, ctx);
  PrintedImage zb = hard_print(eng, out.mask_b, ctx);
  OpcResult& res = out.result;
  res.printed = za;
  for (size_t i = 0; i < n; ++i)
    res.printed.values[i] = std::max(za.values[i], zb.values[i]);  // hard OR
  res.mask = MaskGrid(target.width, target.height, target.pitch);
  for (size_t i = 0; i < n; ++i)
    res.mask.values[i] = std::max(out.mask_a.values[i], out.mask_b.values[i]);
  res.mse = mse(res.printed, target);
  res.final_objective = dc.objective;
  res.iterations = dc.iterations;
  res.engine = "ILT-DUAL";
  res.runtime_seconds = seconds_since(t0);
  return out;
}

}  // namespace hopc
