#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// First-order adaptive differential microphone (Elko/Pong style).
///
/// For each (front, back) channel pair two back-to-back cardioids are formed
/// with a fractional delay of distance / c_sound:
///
///     Cf = x_front - D(x_back)      (null towards the rear)
///     Cb = x_back  - D(x_front)     (null towards the front)
///     y  = Cf - beta * Cb
///
/// beta in [0, 1] follows a normalized LMS rule minimizing the output power,
/// and a one-pole low-pass equalizes the differential high-pass tilt so the
/// on-axis response is unity at 1 kHz. Output channel p belongs to pair p.
class Adm : public Plugin {
 public:
  explicit Adm(const PluginContext& ctx);

  WaveFragment& process(WaveFragment& s) override;

  /// Magnitude of the on-axis (frontal) differential response times the
  /// equalizer at angular frequency omega (rad/sample).
  static double on_axis_gain(double omega, double delay_samples, double eq_a, double eq_b) noexcept;

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
  void on_update() override { publish(); }

 private:
  struct Config {
    std::size_t delay_int = 0;
    float delay_frac = 0.0f;
    float mu = 0.0f;
    float eq_a = 0.0f;
    float eq_b = 1.0f;
    bool bypass = false;
  };
  struct PairState {
    std::size_t front = 0;
    std::size_t back = 0;
    double beta = 0.0;
    double power = 0.0;  // smoothed Cb^2
    double eq_state = 0.0;
  };

  std::unique_ptr<const Config> make_config(double srate) const;
  void publish();

  static constexpr std::size_t kHistory = 128;  // power of two; bounds the delay

  Variable& pairs_;
  Variable& distance_;
  Variable& c_sound_;
  Variable& mu_;
  Variable& beta_init_;
  Variable& bypass_;
  Variable& beta_mon_;

  HandoverCell<Config> cfg_;
  std::vector<PairState> state_;
  WaveFragment history_;  // in_channels x kHistory ring buffers
  std::size_t pos_ = 0;
  double power_alpha_ = 0.0;
  WaveFragment out_;
  std::unique_ptr<std::atomic<float>[]> beta_out_;
};

}  // namespace mha::plugins
