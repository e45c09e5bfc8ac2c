#pragma once

#include <memory>
#include <random>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// Adds a sine or white noise of a given level in dB SPL to every channel.
/// The sine phase runs continuously across fragments.
class SigGen : public Plugin {
 public:
  explicit SigGen(const PluginContext& ctx);
  WaveFragment& process(WaveFragment& s) override;

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
  void on_update() override;

 private:
  enum class Mode { off, sine, noise };
  struct Config {
    Mode mode = Mode::off;
    double phase_inc = 0.0;  // rad per sample
    float amplitude = 0.0f;  // sine peak or noise half-width, Pa
  };
  std::unique_ptr<const Config> make_config(double srate) const;

  Variable& mode_;
  Variable& freq_;
  Variable& level_;
  HandoverCell<Config> cfg_;
  double phase_ = 0.0;
  std::mt19937 rng_;
};

}  // namespace mha::plugins
