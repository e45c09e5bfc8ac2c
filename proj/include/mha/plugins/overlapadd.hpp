#pragma once

#include <memory>
#include <vector>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// STFT framework: windowed analysis with a periodic Hann window, spectral
/// child plugin, inverse FFT and overlap-add. With an identity child the
/// output equals the input delayed by wnd.len - fragsize samples.
class OverlapAdd : public Plugin {
 public:
  explicit OverlapAdd(const PluginContext& ctx);
  ~OverlapAdd() override;

  WaveFragment& process(WaveFragment& s) override;
  std::size_t latency() const noexcept override;

  Plugin* child() const noexcept { return child_.get(); }

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
  void on_release() override;

 private:
  Variable& fftlen_;
  Variable& wndlen_;
  PluginSlot child_;

  std::unique_ptr<RealFft> fft_;
  std::vector<float> window_;
  std::vector<float> norm_;      // 1/C[n] for n < hop
  WaveFragment history_;         // in_channels x wndlen
  WaveFragment accum_;           // out_channels x wndlen
  WaveFragment out_;             // out_channels x hop
  SpecFragment spec_;            // in_channels x bins
  std::vector<float> frame_;     // fftlen
  std::size_t hop_ = 0;
  std::size_t wnd_ = 0;
  std::size_t len_ = 0;
};

}  // namespace mha::plugins
