#pragma once
#include <complex>
#include <memory>
#include <vector>

#include "hopc/optics.hpp"

namespace hopc {

/// Zero-padded linear convolution of a W x H mask with every kernel of a
/// KernelSet, via FFT. One engine is built per (mask size, kernel set)
/// and owns its FFTW plans and scratch buffers; engines are not
/// thread-safe, but separate engines over a shared KernelSet are.
class ConvEngine {
 public:
  ConvEngine(int width, int height, const KernelSet& ks);
  ~ConvEngine();
  ConvEngine(const ConvEngine&) = delete;
  ConvEngine& operator=(const ConvEngine&) = delete;

  struct Forward {
    // Coherent fields u_k = mask (*) h_k on the padded domain, and the
    // intensity I = sum_k w_k |u_k|^2 restricted to the mask domain.
    std::vector<std::vector<std::complex<double>>> fields;
    std::vector<double> intensity;
  };

  /// mask: W*H row-major reals.
  Forward forward(const std::vector<double>& mask);

  /// Chain-rule pullback: given dF/dI on the mask domain and the fields
  /// from forward(), returns dF/dmask (W*H reals).
  std::vector<double> adjoint(const Forward& fwd, const std::vector<double>& grad_intensity);

  int width() const { return width_; }
  int height() const { return height_; }
  int kernel_count() const { return int(weights_.size()); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int width_, height_;
  std::vector<double> weights_;
};

}  // namespace hopc
