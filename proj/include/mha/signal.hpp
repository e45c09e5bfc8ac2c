#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "mha/error.hpp"

namespace mha {

enum class Domain { waveform, spectrum };

/// Signal contract threaded through a plugin chain.
struct SignalInfo {
  std::size_t channels = 1;
  Domain domain = Domain::waveform;
  std::size_t fragsize = 1;  // samples per fragment (hop size)
  double srate = 44100.0;
  std::size_t fftlen = 0;  // spectrum domain only
  std::size_t wndlen = 0;  // spectrum domain only

  std::size_t num_bins() const noexcept { return fftlen / 2 + 1; }
  /// Throws Error(ConstraintViolation) when the invariants do not hold.
  void validate() const;

  friend bool operator==(const SignalInfo&, const SignalInfo&) = default;
};

/// channels x frames block of samples, stored channel after channel.
template <class T>
class Fragment {
 public:
  using value_type = T;

  Fragment() = default;
  Fragment(std::size_t channels, std::size_t frames)
      : channels_(channels), frames_(frames), data_(channels * frames) {}

  std::size_t channels() const noexcept { return channels_; }
  std::size_t frames() const noexcept { return frames_; }

  std::span<T> channel(std::size_t c) noexcept { return {data_.data() + c * frames_, frames_}; }
  std::span<const T> channel(std::size_t c) const noexcept {
    return {data_.data() + c * frames_, frames_};
  }

  T& operator()(std::size_t c, std::size_t k) noexcept { return data_[c * frames_ + k]; }
  const T& operator()(std::size_t c, std::size_t k) const noexcept { return data_[c * frames_ + k]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  void fill(T value) noexcept { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Fragment&, const Fragment&) = default;

 private:
  std::size_t channels_ = 0;
  std::size_t frames_ = 0;
  std::vector<T> data_;
};

/// Time-domain block; Pascal after input calibration.
using WaveFragment = Fragment<float>;
/// One-sided spectrum, channels x (fftlen/2 + 1) bins.
using SpecFragment = Fragment<std::complex<float>>;

// ---- level mathematics -----------------------------------------------------

inline constexpr double kRefPressure = 2e-5;  // Pa
/// Level reported for an all-zero signal.
inline constexpr double kSilenceDb = -1000.0;

/// Digital amplitude 1.0 maps to a peak pressure of p_ref * 10^(peaklevel/20).
double digital_to_pascal(double x, double peaklevel_db) noexcept;
double pascal_to_digital(double p, double peaklevel_db) noexcept;

/// 10*log10(x / p_ref^2) for a mean-square pressure x; kSilenceDb for x <= 0.
double power_to_spl(double mean_square) noexcept;
double spl_to_power(double spl_db) noexcept;

/// RMS level of one channel of a fragment in dB SPL.
double wave_rms_spl(const WaveFragment& frag, std::size_t channel);

struct BinRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
};

/// Parseval-consistent band power (Pa^2) of one spectrum channel:
/// sum_k c_k |X_k|^2 / (fftlen * sum_n w[n]^2), c_k = 1 at DC and Nyquist,
/// 2 elsewhere. Throws EmptyBins for an empty range.
double spec_band_rms(const SpecFragment& spec, std::size_t channel, BinRange bins,
                     double window_energy, std::size_t fftlen);

/// Periodic Hann window w[n] = 0.5 (1 - cos(2 pi n / len)).
std::vector<double> periodic_hann(std::size_t len);
double window_energy(std::span<const double> window) noexcept;

/// Real-input FFT of a fixed power-of-two length. Forward is unscaled, inverse
/// is unscaled too (callers divide by the length). Plans are created in the
/// constructor; forward()/inverse() do not allocate.
class RealFft {
 public:
  explicit RealFft(std::size_t length);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t length() const noexcept { return length_; }
  std::size_t num_bins() const noexcept { return length_ / 2 + 1; }

  void forward(std::span<const float> in, std::span<std::complex<float>> out);
  void inverse(std::span<const std::complex<float>> in, std::span<float> out);

 private:
  struct Impl;
  std::size_t length_;
  std::unique_ptr<Impl> impl_;
};

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace mha
