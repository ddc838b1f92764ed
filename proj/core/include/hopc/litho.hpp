#pragma once
#include "hopc/fft.hpp"
#include "hopc/grid.hpp"
#include "hopc/optics.hpp"

namespace hopc {

struct AerialImage {
  int width = 0, height = 0;
  coord_t pitch = 1;
  std::vector<double> values;  // intensity, >= 0

  double at(int ix, int iy) const { return values[size_t(iy) * width + ix]; }
};

struct ResistConfig {
  double threshold = 0.225;  // intensity at the print edge, unit-norm kernels
  double steepness = 50.0;   // sigmoid alpha

  void validate() const {
    if (threshold <= 0) throw ConfigError("resist: threshold must be positive");
    if (steepness <= 0) throw ConfigError("resist: steepness must be positive");
  }
};

enum class ResistMode { Relaxed, Hard };

struct PrintedImage {
  int width = 0, height = 0;
  coord_t pitch = 1;
  ResistMode mode = ResistMode::Relaxed;
  std::vector<double> values;  // [0,1]; {0,1} only in Hard mode

  double at(int ix, int iy) const { return values[size_t(iy) * width + ix]; }
};

/// I = sum_k w_k |mask (*) h_k|^2, frequency-domain, zero padded.
AerialImage aerial_image(const MaskGrid& mask, const KernelSet& ks);

/// Elementwise sum of the two single-exposure images.
AerialImage double_exposure_image(const MaskGrid& a, const MaskGrid& b, const KernelSet& ks);

/// Relaxed: 1/(1+exp(-alpha*(I-I_th))); Hard: I > I_th.
PrintedImage resist_threshold(const AerialImage& img, const ResistConfig& rc, ResistMode mode);

/// Unnormalized sum of squared pixel differences. Target must be binary.
double mse(const PrintedImage& printed, const MaskGrid& target);

/// Everything the engines need to print a design, bundled. The kernel
/// set is synthesized once for the grid pitch and shared (immutable).
struct LithoContext {
  GridConfig grid;
  OpticsConfig optics;
  ResistConfig resist;
  KernelSet kernels;

  static LithoContext make(const GridConfig& grid, const OpticsConfig& optics,
                           const ResistConfig& resist);
};

}  // namespace hopc
