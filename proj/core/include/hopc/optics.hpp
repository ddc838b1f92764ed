#pragma once
#include <complex>
#include <vector>

#include "hopc/error.hpp"
#include "hopc/geometry.hpp"

namespace hopc {

struct OpticsConfig {
  double wavelength = 193.0;  // nm
  double na = 0.85;           // numerical aperture, in (0,1]
  int kernel_count = 4;
  std::vector<double> kernel_weights = {0.6, 0.2, 0.12, 0.08};  // non-increasing, sums to 1
  int support_radius = 50;                                      // pixels

  void validate() const;
};

/// One coherent kernel on a (2R+1)^2 grid centered at (R, R).
struct Kernel {
  int radius = 0;
  std::vector<std::complex<double>> values;  // row-major, side = 2*radius+1

  int side() const { return 2 * radius + 1; }
  std::complex<double>& at(int ix, int iy) { return values[size_t(iy) * side() + ix]; }
  std::complex<double> at(int ix, int iy) const { return values[size_t(iy) * side() + ix]; }
};

struct KernelSet {
  std::vector<Kernel> kernels;
  std::vector<double> weights;
  coord_t pitch = 1;  // nm per pixel the kernels were sampled at
};

/// Airy/jinc point-spread family with cutoff NA/lambda. Kernel 0 is the
/// plain jinc; kernels 1..K-1 add Gaussian defocus envelopes of
/// increasing width. Each kernel is unit L2 norm and zero outside
/// support_radius. The stored weights fold in a per-kernel DC
/// normalization so a fully open mask images at intensity ~= 1, the
/// scale the default resist threshold is calibrated against.
KernelSet synthesize_kernels(const OpticsConfig& cfg, coord_t pitch);

/// Radius of the first jinc zero in nm: 0.61 * lambda / NA (first J1 root).
double airy_first_zero_nm(const OpticsConfig& cfg);

}  // namespace hopc
