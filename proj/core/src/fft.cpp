#include "hopc/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace hopc {

namespace {

std::mutex g_plan_mutex;  // FFTW plan creation is not thread-safe

// Smallest 5-smooth integer >= n; FFTW is fast on these sizes.
int good_fft_size(int n) {
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace

struct ConvEngine::Impl {
  int pw = 0, ph = 0;  // padded dims
  std::vector<double> weights;
  std::vector<std::vector<std::complex<double>>> kernel_spectra;  // H_k, padded
  fftw_complex* buf_a = nullptr;
  fftw_complex* buf_b = nullptr;
  fftw_plan plan_fwd = nullptr;
  fftw_plan plan_bwd = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    if (plan_fwd) fftw_destroy_plan(plan_fwd);
    if (plan_bwd) fftw_destroy_plan(plan_bwd);
    if (buf_a) fftw_free(buf_a);
    if (buf_b) fftw_free(buf_b);
  }

  size_t n() const { return size_t(pw) * ph; }

  void fft(const std::complex<double>* in, std::complex<double>* out, bool forward) {
    std::memcpy(buf_a, in, n() * sizeof(fftw_complex));
    fftw_execute_dft(forward ? plan_fwd : plan_bwd, buf_a, buf_b);
    std::memcpy(out, buf_b, n() * sizeof(fftw_complex));
    if (!forward) {
      double scale = 1.0 / double(n());
      for (size_t i = 0; i < n(); ++i) out[i] *= scale;
    }
  }
};

ConvEngine::ConvEngine(int width, int height, const KernelSet& ks)
    : impl_(std::make_unique<Impl>()), width_(width), height_(height), weights_(ks.weights) {
  if (ks.kernels.empty()) throw ConfigError("ConvEngine: empty kernel set");
  const int side = ks.kernels[0].side();
  if (width < side || height < side)
    throw InputError("ConvEngine: mask dimensions smaller than kernel support");

  impl_->weights = ks.weights;
  impl_->pw = good_fft_size(width + side - 1);
  impl_->ph = good_fft_size(height + side - 1);
  const size_t n = impl_->n();

  {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    impl_->buf_a = fftw_alloc_complex(n);
    impl_->buf_b = fftw_alloc_complex(n);
    impl_->plan_fwd = fftw_plan_dft_2d(impl_->ph, impl_->pw, impl_->buf_a, impl_->buf_b,
                                       FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->plan_bwd = fftw_plan_dft_2d(impl_->ph, impl_->pw, impl_->buf_a, impl_->buf_b,
                                       FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  // Kernel spectra with the kernel center wrapped to the origin, so the
  // circular convolution of the padded mask lines up with mask indices.
  std::vector<std::complex<double>> pad(n);
  for (const Kernel& ker : ks.kernels) {
    if (ker.side() != side) throw ConfigError("ConvEngine: kernels differ in support");
    std::fill(pad.begin(), pad.end(), std::complex<double>{0, 0});
    const int R = ker.radius;
    for (int dy = -R; dy <= R; ++dy) {
      int wy = (dy % impl_->ph + impl_->ph) % impl_->ph;
      for (int dx = -R; dx <= R; ++dx) {
        int wx = (dx % impl_->pw + impl_->pw) % impl_->pw;
        pad[size_t(wy) * impl_->pw + wx] = ker.at(dx + R, dy + R);
      }
    }
    std::vector<std::complex<double>> spec(n);
    impl_->fft(pad.data(), spec.data(), true);
    impl_->kernel_spectra.push_back(std::move(spec));
  }
}

ConvEngine::~ConvEngine() = default;

ConvEngine::Forward ConvEngine::forward(const std::vector<double>& mask) {
  if (mask.size() != size_t(width_) * height_)
    throw InputError("ConvEngine: mask size mismatch");
  const size_t n = impl_->n();
  const int pw = impl_->pw;

  std::vector<std::complex<double>> pad(n, {0, 0});
  for (int iy = 0; iy < height_; ++iy)
    for (int ix = 0; ix < width_; ++ix)
      pad[size_t(iy) * pw + ix] = mask[size_t(iy) * width_ + ix];

  std::vector<std::complex<double>> mask_spec(n);
  impl_->fft(pad.data(), mask_spec.data(), true);

  Forward out;
  out.intensity.assign(size_t(width_) * height_, 0.0);
  for (size_t k = 0; k < impl_->kernel_spectra.size(); ++k) {
    std::vector<std::complex<double>> prod(n);
    const auto& H = impl_->kernel_spectra[k];
    for (size_t i = 0; i < n; ++i) prod[i] = mask_spec[i] * H[i];
    std::vector<std::complex<double>> field(n);
    impl_->fft(prod.data(), field.data(), false);
    const double w = weights_[k];
    for (int iy = 0; iy < height_; ++iy)
      for (int ix = 0; ix < width_; ++ix)
        out.intensity[size_t(iy) * width_ + ix] += w * std::norm(field[size_t(iy) * pw + ix]);
    out.fields.push_back(std::move(field));
  }
  return out;
}

std::vector<double> ConvEngine::adjoint(const Forward& fwd,
                                        const std::vector<double>& grad_intensity) {
  if (grad_intensity.size() != size_t(width_) * height_)
    throw InputError("ConvEngine: gradient size mismatch");
  const size_t n = impl_->n();
  const int pw = impl_->pw;

  // dF/dmask = 2 sum_k w_k Re[ corr(g .* conj(u_k), h_k) ]; the kernels
  // are real-valued, so the correlation spectrum is conj(H_k).
  std::vector<std::complex<double>> acc(n, {0, 0});
  std::vector<std::complex<double>> s(n), spec(n);
  for (size_t k = 0; k < impl_->kernel_spectra.size(); ++k) {
    std::fill(s.begin(), s.end(), std::complex<double>{0, 0});
    for (int iy = 0; iy < height_; ++iy)
      for (int ix = 0; ix < width_; ++ix)
        s[size_t(iy) * pw + ix] = grad_intensity[size_t(iy) * width_ + ix] *
                                  std::conj(fwd.fields[k][size_t(iy) * pw + ix]);
    impl_->fft(s.data(), spec.data(), true);
    const auto& H = impl_->kernel_spectra[k];
    const double w = weights_[k];
    for (size_t i = 0; i < n; ++i) acc[i] += w * spec[i] * std::conj(H[i]);
  }
  std::vector<std::complex<double>> t(n);
  impl_->fft(acc.data(), t.data(), false);

  std::vector<double> grad(size_t(width_) * height_);
  for (int iy = 0; iy < height_; ++iy)
    for (int ix = 0; ix < width_; ++ix)
      grad[size_t(iy) * width_ + ix] = 2.0 * t[size_t(iy) * pw + ix].real();
  return grad;
}

}  // namespace hopc
