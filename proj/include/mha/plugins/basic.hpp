#pragma once

#include <memory>
#include <vector>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// Attenuates the input signal by 20 dB (factor 0.1).
class Attenuate20 : public Plugin {
 public:
  explicit Attenuate20(const PluginContext& ctx);
  WaveFragment& process(WaveFragment& s) override;

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
};

/// Per-channel gain in dB; a single entry applies to all channels.
class Gain : public Plugin {
 public:
  explicit Gain(const PluginContext& ctx);
  WaveFragment& process(WaveFragment& s) override;

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
  void on_update() override;

 private:
  struct Config {
    std::vector<float> factor;
  };
  std::unique_ptr<const Config> make_config(std::size_t channels) const;

  Variable& gains_;
  HandoverCell<Config> cfg_;
};

/// Passes both waveform and spectrum signals through unchanged.
class Identity : public Plugin {
 public:
  explicit Identity(const PluginContext& ctx);
  WaveFragment& process(WaveFragment& s) override { return s; }
  SpecFragment& process(SpecFragment& s) override { return s; }

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override { return in; }
};

}  // namespace mha::plugins
