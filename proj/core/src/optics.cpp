#include "hopc/optics.hpp"

#include <cmath>
#include <numbers>

namespace hopc {

namespace {
// First positive root of J1.
constexpr double kJ1FirstZero = 3.8317059702075123;
}  // namespace

void OpticsConfig::validate() const {
  if (wavelength <= 0) throw ConfigError("optics: wavelength must be positive");
  if (na <= 0 || na > 1) throw ConfigError("optics: NA must lie in (0,1]");
  if (kernel_count < 1) throw ConfigError("optics: kernel_count must be >= 1");
  if (int(kernel_weights.size()) < kernel_count)
    throw ConfigError("optics: need a weight for each kernel");
  double sum = 0;
  for (int k = 0; k < kernel_count; ++k) {
    if (kernel_weights[k] < 0) throw ConfigError("optics: kernel weights must be nonnegative");
    if (k > 0 && kernel_weights[k] > kernel_weights[k - 1])
      throw ConfigError("optics: kernel weights must be non-increasing");
    sum += kernel_weights[k];
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("optics: kernel weights must sum to 1");
  if (support_radius < 1) throw ConfigError("optics: support_radius must be positive");
}

double airy_first_zero_nm(const OpticsConfig& cfg) {
  // jinc argument is 2*pi*(NA/lambda)*r; zero where it hits kJ1FirstZero.
  return kJ1FirstZero * cfg.wavelength / (2.0 * std::numbers::pi * cfg.na);
}

KernelSet synthesize_kernels(const OpticsConfig& cfg, coord_t pitch) {
  cfg.validate();
  if (pitch < 1) throw ConfigError("optics: pitch must be positive");

  const double first_zero_px = airy_first_zero_nm(cfg) / double(pitch);
  if (first_zero_px < 3.0 || cfg.support_radius < 3)
    throw ConfigError("optics: support too small to contain the first Airy ring");
  if (cfg.support_radius < first_zero_px)
    throw ConfigError("optics: support_radius " + std::to_string(cfg.support_radius) +
                      " px truncates the first Airy ring at " + std::to_string(first_zero_px) +
                      " px");

  const int R = cfg.support_radius;
  const double freq = 2.0 * std::numbers::pi * cfg.na / cfg.wavelength;  // rad per nm

  KernelSet ks;
  ks.pitch = pitch;
  for (int k = 0; k < cfg.kernel_count; ++k) {
    Kernel ker;
    ker.radius = R;
    ker.values.assign(size_t(ker.side()) * ker.side(), {0.0, 0.0});
    // Envelope width grows with kernel index; kernel 0 is the bare jinc.
    const double sigma = k == 0 ? 0.0 : double(R) * (0.5 + 0.5 * double(k - 1) /
                                                               std::max(1, cfg.kernel_count - 1));
    double norm2 = 0;
    for (int iy = -R; iy <= R; ++iy) {
      for (int ix = -R; ix <= R; ++ix) {
        double r_px = std::hypot(double(ix), double(iy));
        if (r_px > double(R)) continue;
        double arg = freq * r_px * double(pitch);
        double jinc = arg == 0.0 ? 1.0 : 2.0 * std::cyl_bessel_j(1, arg) / arg;
        if (sigma > 0.0) jinc *= std::exp(-0.5 * (r_px / sigma) * (r_px / sigma));
        ker.at(ix + R, iy + R) = {jinc, 0.0};
        norm2 += jinc * jinc;
      }
    }
    double inv = 1.0 / std::sqrt(norm2);
    double dc = 0.0;  // DC gain of the unit-norm kernel
    for (auto& v : ker.values) {
      v *= inv;
      dc += v.real();
    }
    ks.kernels.push_back(std::move(ker));
    // Fold a DC normalization into the weight so a fully open mask images
    // at intensity ~= 1; the resist threshold default is calibrated to
    // that scale (a long straight edge sits near quarter clear-field).
    ks.weights.push_back(cfg.kernel_weights[k] / (dc * dc));
  }
  return ks;
}

}  // namespace hopc
