#pragma once

#include "mha/plugin.hpp"

namespace mha::plugins {

/// Sums groups of adjacent channels: output c = sum of inputs c*B .. c*B+B-1,
/// B = input channels / outchannels. Matches the filterbank's channel-major
/// band layout.
class CombineChannels : public Plugin {
 public:
  explicit CombineChannels(const PluginContext& ctx);

  WaveFragment& process(WaveFragment& s) override { return combine(s, wave_); }
  SpecFragment& process(SpecFragment& s) override { return combine(s, spec_); }

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;

 private:
  template <class F>
  F& combine(const F& in, F& out) {
    for (std::size_t c = 0; c < out.channels(); ++c) {
      auto o = out.channel(c);
      auto first = in.channel(c * group_);
      std::copy(first.begin(), first.end(), o.begin());
      for (std::size_t b = 1; b < group_; ++b) {
        auto x = in.channel(c * group_ + b);
        for (std::size_t k = 0; k < o.size(); ++k) o[k] += x[k];
      }
    }
    return out;
  }

  Variable& outchannels_;
  std::size_t group_ = 1;
  WaveFragment wave_;
  SpecFragment spec_;
};

}  // namespace mha::plugins
