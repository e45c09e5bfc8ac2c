#include "mha/plugins/transducers.hpp"

#include <algorithm>
#include <cmath>

#include "mha/plugins/util.hpp"

namespace mha::plugins {

Transducers::Transducers(const PluginContext& ctx)
    : Plugin(ctx, "Input and output calibration. Loads one processing plugin via plugin_name."),
      peak_in_(parameter("calib_in.peaklevel", std::vector<double>{93.9794},
                         "Input level in dB SPL of a digital full-scale peak, per channel")),
      peak_out_(parameter("calib_out.peaklevel", std::vector<double>{93.9794},
                          "Output level in dB SPL of a digital full-scale peak, per channel")),
      clipped_(monitor("calib_out.clipped", std::int64_t{0}, "Output samples clipped since prepare")),
      child_(ns(), ac(), registry()) {
  auto& name = parameter("plugin_name", std::string{}, "Processing plugin to load", {}, Role::structural);
  name.on_post_write([this](const Variable& v) { child_.load(v.as_text()); });
  clipped_.on_pre_read([this](Variable& v) {
    v.set(static_cast<std::int64_t>(clip_count_.load(std::memory_order_relaxed)));
  });
}

SignalInfo Transducers::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::waveform)
    throw Error(Errc::DomainError, "transducers can only process waveform");
  SignalInfo out = in;
  if (child_) {
    try {
      out = child_->prepare(in);
    } catch (...) {
      rethrow_with_context(child_->name());
    }
    if (out.domain != Domain::waveform) {
      child_->release();
      throw Error(Errc::DomainError, child_->name() + ": output must be waveform");
    }
  }
  try {
    cfg_.reset();
    cfg_.publish(make_config(in.channels, out.channels));
  } catch (...) {
    if (child_) child_->release();
    throw;
  }
  clip_count_.store(0);
  return out;
}

std::unique_ptr<const Transducers::Config> Transducers::make_config(std::size_t in_ch,
                                                                     std::size_t out_ch) const {
  auto c = std::make_unique<Config>();
  for (double p : broadcast(peak_in_.as_vec_real(), in_ch, "calib_in.peaklevel"))
    c->in_gain.push_back(static_cast<float>(digital_to_pascal(1.0, p)));
  for (double p : broadcast(peak_out_.as_vec_real(), out_ch, "calib_out.peaklevel"))
    c->out_gain.push_back(static_cast<float>(pascal_to_digital(1.0, p)));
  return c;
}

void Transducers::publish() {
  cfg_.publish(make_config(input_info().channels, output_info().channels));
  cfg_.reclaim();
}

void Transducers::on_release() {
  if (child_) child_->release();
}

WaveFragment& Transducers::process(WaveFragment& s) {
  const Config& c = *cfg_.acquire();
  for (std::size_t ch = 0; ch < s.channels(); ++ch) {
    const float g = c.in_gain[ch];
    for (float& x : s.channel(ch)) x *= g;
  }
  WaveFragment& out = child_ ? child_->process(s) : s;
  std::uint64_t clipped = 0;
  for (std::size_t ch = 0; ch < out.channels(); ++ch) {
    const float g = c.out_gain[ch];
    for (float& x : out.channel(ch)) {
      x *= g;
      if (std::abs(x) > 1.0f) {
        x = std::clamp(x, -1.0f, 1.0f);
        ++clipped;
      }
    }
  }
  if (clipped) clip_count_.fetch_add(clipped, std::memory_order_relaxed);
  return out;
}

}  // namespace mha::plugins
