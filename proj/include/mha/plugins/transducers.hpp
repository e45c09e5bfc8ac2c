#pragma once

#include <atomic>
#include <vector>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// Input/output calibration around a single child plugin. Converts digital
/// input to Pascal with calib_in.peaklevel, runs the child, and converts back
/// with calib_out.peaklevel, clipping to [-1, 1].
class Transducers : public Plugin {
 public:
  explicit Transducers(const PluginContext& ctx);

  WaveFragment& process(WaveFragment& s) override;
  std::size_t latency() const noexcept override { return child_ ? child_->latency() : 0; }

  Plugin* child() const noexcept { return child_.get(); }

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
  void on_release() override;
  void on_update() override { publish(); }

 private:
  struct Config {
    std::vector<float> in_gain;   // per input channel
    std::vector<float> out_gain;  // per output channel
  };

  std::unique_ptr<const Config> make_config(std::size_t in_ch, std::size_t out_ch) const;
  void publish();

  Variable& peak_in_;
  Variable& peak_out_;
  Variable& clipped_;
  PluginSlot child_;
  HandoverCell<Config> cfg_;
  std::atomic<std::uint64_t> clip_count_{0};
};

}  // namespace mha::plugins
