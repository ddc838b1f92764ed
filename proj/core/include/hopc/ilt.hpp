#pragma once
#include <optional>
#include <string>

#include "hopc/litho.hpp"

namespace hopc {

struct IltConfig {
  int max_iters = 200;
  double step_size = 1.0;
  double mask_steepness = 4.0;  // sigmoid sharpness of the mask relaxation
  double stop_tol = 1e-5;       // relative objective decrease
  bool line_search = true;
  std::string trace_path;  // per-iteration CSV (iteration,objective,step,seconds) when set

  void validate() const {
    if (max_iters < 1) throw ConfigError("ilt: max_iters must be >= 1");
    if (step_size <= 0) throw ConfigError("ilt: step_size must be positive");
    if (mask_steepness <= 0) throw ConfigError("ilt: mask_steepness must be positive");
    if (stop_tol < 0) throw ConfigError("ilt: stop_tol must be >= 0");
  }
};

/// Unconstrained pixel parameters; the mask is sigmoid(steepness * p).
struct MaskParams {
  int width = 0, height = 0;
  std::vector<double> params;

  MaskGrid mask(double steepness, coord_t pitch) const;
  /// steepness^-1 * logit(clamp(target, lo, 1-lo))
  static MaskParams from_target(const MaskGrid& target, double steepness, double lo = 0.05);
  static MaskParams constant(int w, int h, double mask_value, double steepness);
};

struct OpcResult {
  MaskGrid mask;         // binarized at 0.5
  PrintedImage printed;  // hard mode
  double mse = 0;              // recomputed from mask/printed vs target
  double final_objective = 0;  // relaxed objective at the last accepted step
  double runtime_seconds = 0;
  std::string engine;
  int iterations = 0;
};

double ilt_objective(const MaskParams& p, const MaskGrid& target, const LithoContext& ctx,
                     double mask_steepness);

/// dF/dparams by the chain rule through the mask sigmoid, the SOCS
/// convolution adjoint and the resist sigmoid.
std::vector<double> ilt_gradient(const MaskParams& p, const MaskGrid& target,
                                 const LithoContext& ctx, double mask_steepness);

OpcResult run_ilt(const MaskGrid& target, const IltConfig& cfg, const LithoContext& ctx);

struct DualIltOutput {
  OpcResult result;  // printed/mse from the OR of both exposures
  MaskGrid mask_a;
  MaskGrid mask_b;
};

/// Joint two-mask optimization with the relaxed OR print
/// z = 1 - (1-z1)(1-z2).
DualIltOutput run_dual_ilt(const MaskGrid& target, const IltConfig& cfg, const LithoContext& ctx);

}  // namespace hopc
