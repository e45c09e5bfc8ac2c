#pragma once

#include <atomic>
#include <memory>
#include <vector>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// Broadband level meter. Passes the waveform through and publishes the
/// smoothed level of each channel in dB SPL as monitor `level_db`.
class LevelMeter : public Plugin {
 public:
  static constexpr double kTau = 0.125;  // s

  explicit LevelMeter(const PluginContext& ctx);
  WaveFragment& process(WaveFragment& s) override;

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;

 private:
  Variable& level_mon_;
  double alpha_ = 0.0;
  std::vector<double> power_;
  std::unique_ptr<std::atomic<double>[]> level_out_;
};

}  // namespace mha::plugins
