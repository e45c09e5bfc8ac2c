#include "mha/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mha {

void SignalInfo::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::ConstraintViolation, what); };
  if (channels < 1) fail("signal needs at least one channel");
  if (fragsize < 1) fail("fragsize must be at least 1");
  if (!(srate > 0)) fail("srate must be positive");
  if (domain == Domain::spectrum) {
    if (!(fragsize <= wndlen && wndlen <= fftlen))
      fail("spectrum signal needs fragsize <= wndlen <= fftlen");
  }
}

double digital_to_pascal(double x, double peaklevel_db) noexcept {
  return x * kRefPressure * std::pow(10.0, peaklevel_db / 20.0);
}

double pascal_to_digital(double p, double peaklevel_db) noexcept {
  return p / (kRefPressure * std::pow(10.0, peaklevel_db / 20.0));
}

double power_to_spl(double mean_square) noexcept {
  if (!(mean_square > 0.0)) return kSilenceDb;
  return 10.0 * std::log10(mean_square / (kRefPressure * kRefPressure));
}

double spl_to_power(double spl_db) noexcept {
  return kRefPressure * kRefPressure * std::pow(10.0, spl_db / 10.0);
}

double wave_rms_spl(const WaveFragment& frag, std::size_t channel) {
  if (channel >= frag.channels()) throw Error(Errc::ConstraintViolation, "channel out of range");
  auto x = frag.channel(channel);
  if (x.empty()) return kSilenceDb;
  double acc = 0.0;
  for (float s : x) acc += static_cast<double>(s) * s;
  return power_to_spl(acc / static_cast<double>(x.size()));
}

double spec_band_rms(const SpecFragment& spec, std::size_t channel, BinRange bins,
                     double window_energy, std::size_t fftlen) {
  if (bins.size() == 0) throw Error(Errc::EmptyBins, "band has no bins");
  const std::size_t nyquist = fftlen / 2;
  auto x = spec.channel(channel);
  double acc = 0.0;
  for (std::size_t k = bins.begin; k < bins.end; ++k) {
    const double weight = (k == 0 || k == nyquist) ? 1.0 : 2.0;
    acc += weight * std::norm(std::complex<double>(x[k]));
  }
  return acc / (static_cast<double>(fftlen) * window_energy);
}

std::vector<double> periodic_hann(std::size_t len) {
  std::vector<double> w(len);
  for (std::size_t n = 0; n < len; ++n)
    w[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(len)));
  return w;
}

double window_energy(std::span<const double> window) noexcept {
  double e = 0.0;
  for (double v : window) e += v * v;
  return e;
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

// ---- FFT ---------------------------------------------------------------------

struct RealFft::Impl {
  float* time = nullptr;
  fftwf_complex* freq = nullptr;
  fftwf_plan fwd = nullptr;
  fftwf_plan inv = nullptr;

  ~Impl() {
    if (fwd) fftwf_destroy_plan(fwd);
    if (inv) fftwf_destroy_plan(inv);
    fftwf_free(time);
    fftwf_free(freq);
  }
};

RealFft::RealFft(std::size_t length) : length_(length), impl_(std::make_unique<Impl>()) {
  if (!is_power_of_two(length) || length < 2)
    throw Error(Errc::ConstraintViolation, "FFT length must be a power of two");
  const int n = static_cast<int>(length);
  impl_->time = fftwf_alloc_real(length);
  impl_->freq = fftwf_alloc_complex(length / 2 + 1);
  impl_->fwd = fftwf_plan_dft_r2c_1d(n, impl_->time, impl_->freq, FFTW_ESTIMATE);
  impl_->inv = fftwf_plan_dft_c2r_1d(n, impl_->freq, impl_->time, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->inv) throw Error(Errc::InternalError, "FFT planning failed");
}

RealFft::~RealFft() = default;

void RealFft::forward(std::span<const float> in, std::span<std::complex<float>> out) {
  std::copy_n(in.begin(), length_, impl_->time);
  fftwf_execute(impl_->fwd);
  const auto* f = reinterpret_cast<const std::complex<float>*>(impl_->freq);
  std::copy_n(f, num_bins(), out.begin());
}

void RealFft::inverse(std::span<const std::complex<float>> in, std::span<float> out) {
  auto* f = reinterpret_cast<std::complex<float>*>(impl_->freq);
  std::copy_n(in.begin(), num_bins(), f);
  // c2r assumes a Hermitian input; DC and Nyquist are real by definition.
  f[0].imag(0.0f);
  f[length_ / 2].imag(0.0f);
  fftwf_execute(impl_->inv);
  std::copy_n(impl_->time, length_, out.begin());
}

}  // namespace mha
