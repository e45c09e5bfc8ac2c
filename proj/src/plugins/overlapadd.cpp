#include "mha/plugins/overlapadd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mha::plugins {

OverlapAdd::OverlapAdd(const PluginContext& ctx)
    : Plugin(ctx, "Overlap-add STFT framework. Loads one spectral plugin via plugin_name."),
      fftlen_(parameter("fftlen", std::int64_t{256}, "FFT length in samples (power of two)",
                        NumericRange::parse("[2,inf["), Role::structural)),
      wndlen_(parameter("wnd.len", std::int64_t{128}, "Window length in samples (multiple of fragsize)",
                        NumericRange::parse("[2,inf["), Role::structural)),
      child_(ns(), ac(), registry()) {
  auto& name = parameter("plugin_name", std::string{}, "Spectral plugin to load", {}, Role::structural);
  name.on_post_write([this](const Variable& v) { child_.load(v.as_text()); });
}

OverlapAdd::~OverlapAdd() = default;

std::size_t OverlapAdd::latency() const noexcept {
  return wnd_ - hop_ + (child_ ? child_->latency() : 0);
}

SignalInfo OverlapAdd::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::waveform)
    throw Error(Errc::DomainError, "overlapadd can only process waveform");
  const auto fftlen = static_cast<std::size_t>(fftlen_.as_int());
  const auto wndlen = static_cast<std::size_t>(wndlen_.as_int());
  const std::size_t hop = in.fragsize;
  if (!is_power_of_two(fftlen))
    throw Error(Errc::ConstraintViolation, "fftlen " + std::to_string(fftlen) + " is not a power of two");
  if (wndlen > fftlen) throw Error(Errc::ConstraintViolation, "wnd.len exceeds fftlen");
  if (wndlen % hop != 0 || wndlen / hop < 2)
    throw Error(Errc::ConstraintViolation,
                "wnd.len must be an integer multiple (>= 2) of fragsize " + std::to_string(hop));

  SignalInfo spec = in;
  spec.domain = Domain::spectrum;
  spec.fftlen = fftlen;
  spec.wndlen = wndlen;
  SignalInfo spec_out = spec;
  if (child_) {
    try {
      spec_out = child_->prepare(spec);
    } catch (...) {
      rethrow_with_context(child_->name());
    }
    if (spec_out.domain != Domain::spectrum) {
      child_->release();
      throw Error(Errc::DomainError, child_->name() + ": output must be spectrum");
    }
  }

  hop_ = hop;
  wnd_ = wndlen;
  len_ = fftlen;
  const auto w = periodic_hann(wndlen);
  window_.assign(w.begin(), w.end());
  norm_.assign(hop, 0.0f);
  for (std::size_t n = 0; n < hop; ++n) {
    double c = 0.0;
    for (std::size_t m = n; m < wndlen; m += hop) c += w[m];
    norm_[n] = static_cast<float>(1.0 / c);
  }
  fft_ = std::make_unique<RealFft>(fftlen);
  history_ = WaveFragment(in.channels, wndlen);
  accum_ = WaveFragment(spec_out.channels, wndlen);
  out_ = WaveFragment(spec_out.channels, hop);
  spec_ = SpecFragment(in.channels, fftlen / 2 + 1);
  frame_.assign(fftlen, 0.0f);

  SignalInfo out = in;
  out.channels = spec_out.channels;
  return out;
}

void OverlapAdd::on_release() {
  if (child_) child_->release();
  fft_.reset();
}

WaveFragment& OverlapAdd::process(WaveFragment& s) {
  const std::size_t keep = wnd_ - hop_;
  for (std::size_t ch = 0; ch < s.channels(); ++ch) {
    auto hist = history_.channel(ch);
    std::copy(hist.begin() + hop_, hist.end(), hist.begin());
    auto in = s.channel(ch);
    std::copy(in.begin(), in.end(), hist.begin() + keep);
    for (std::size_t n = 0; n < wnd_; ++n) frame_[n] = window_[n] * hist[n];
    std::fill(frame_.begin() + wnd_, frame_.end(), 0.0f);
    fft_->forward(frame_, spec_.channel(ch));
  }

  SpecFragment& y = child_ ? child_->process(spec_) : spec_;

  const float scale = 1.0f / static_cast<float>(len_);
  for (std::size_t ch = 0; ch < y.channels(); ++ch) {
    fft_->inverse(y.channel(ch), frame_);
    auto acc = accum_.channel(ch);
    for (std::size_t n = 0; n < wnd_; ++n) acc[n] += frame_[n] * scale;
    auto o = out_.channel(ch);
    for (std::size_t n = 0; n < hop_; ++n) o[n] = acc[n] * norm_[n];
    std::copy(acc.begin() + hop_, acc.end(), acc.begin());
    std::fill(acc.end() - hop_, acc.end(), 0.0f);
  }
  return out_;
}

}  // namespace mha::plugins
