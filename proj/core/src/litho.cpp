#include "hopc/litho.hpp"

#include <cmath>

namespace hopc {

AerialImage aerial_image(const MaskGrid& mask, const KernelSet& ks) {
  if (mask.pitch != ks.pitch)
    throw InputError("aerial_image: mask and kernels sampled at different pitch");
  ConvEngine eng(mask.width, mask.height, ks);
  ConvEngine::Forward fwd = eng.forward(mask.values);
  AerialImage img;
  img.width = mask.width;
  img.height = mask.height;
  img.pitch = mask.pitch;
  img.values = std::move(fwd.intensity);
  return img;
}

AerialImage double_exposure_image(const MaskGrid& a, const MaskGrid& b, const KernelSet& ks) {
  if (!a.same_shape(b)) throw InputError("double_exposure_image: mask dimension mismatch");
  AerialImage ia = aerial_image(a, ks);
  AerialImage ib = aerial_image(b, ks);
  for (size_t i = 0; i < ia.values.size(); ++i) ia.values[i] += ib.values[i];
  return ia;
}

PrintedImage resist_threshold(const AerialImage& img, const ResistConfig& rc, ResistMode mode) {
  rc.validate();
  PrintedImage out;
  out.width = img.width;
  out.height = img.height;
  out.pitch = img.pitch;
  out.mode = mode;
  out.values.resize(img.values.size());
  for (size_t i = 0; i < img.values.size(); ++i) {
    double I = img.values[i];
    if (mode == ResistMode::Hard) {
      out.values[i] = I > rc.threshold ? 1.0 : 0.0;
    } else {
      out.values[i] = 1.0 / (1.0 + std::exp(-rc.steepness * (I - rc.threshold)));
    }
  }
  return out;
}

double mse(const PrintedImage& printed, const MaskGrid& target) {
  if (printed.width != target.width || printed.height != target.height)
    throw InputError("mse: dimension mismatch");
  double s = 0;
  for (size_t i = 0; i < printed.values.size(); ++i) {
    double t = target.values[i];
    if (t != 0.0 && t != 1.0) throw InputError("mse: target is not binary");
    double d = printed.values[i] - t;
    s += d * d;
  }
  return s;
}

LithoContext LithoContext::make(const GridConfig& grid, const OpticsConfig& optics,
                                const ResistConfig& resist) {
  resist.validate();
  LithoContext ctx;
  ctx.grid = grid;
  ctx.optics = optics;
  ctx.resist = resist;
  ctx.kernels = synthesize_kernels(optics, grid.pitch);
  return ctx;
}

}  // namespace hopc
