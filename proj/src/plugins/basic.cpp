#include "mha/plugins/basic.hpp"

#include <cmath>

#include "mha/plugins/util.hpp"

namespace mha::plugins {

Attenuate20::Attenuate20(const PluginContext& ctx) : Plugin(ctx, "Attenuates the input signal by 20dB") {}

SignalInfo Attenuate20::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::waveform) throw Error(Errc::DomainError, "attenuate20: can only process waveform");
  return in;
}

WaveFragment& Attenuate20::process(WaveFragment& s) {
  for (std::size_t ch = 0; ch < s.channels(); ++ch)
    for (float& x : s.channel(ch)) x = x * 0.1f;
  return s;
}

Gain::Gain(const PluginContext& ctx)
    : Plugin(ctx, "Applies a fixed gain per channel"),
      gains_(parameter("gains", std::vector<double>{0.0}, "Gain in dB, one per channel or one for all")) {}

std::unique_ptr<const Gain::Config> Gain::make_config(std::size_t channels) const {
  auto c = std::make_unique<Config>();
  for (double g : broadcast(gains_.as_vec_real(), channels, "gains"))
    c->factor.push_back(static_cast<float>(std::pow(10.0, g / 20.0)));
  return c;
}

SignalInfo Gain::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::waveform) throw Error(Errc::DomainError, "gain: can only process waveform");
  cfg_.reset();
  cfg_.publish(make_config(in.channels));
  return in;
}

void Gain::on_update() {
  cfg_.publish(make_config(input_info().channels));
  cfg_.reclaim();
}

WaveFragment& Gain::process(WaveFragment& s) {
  const Config& c = *cfg_.acquire();
  for (std::size_t ch = 0; ch < s.channels(); ++ch) {
    const float g = c.factor[ch];
    for (float& x : s.channel(ch)) x *= g;
  }
  return s;
}

Identity::Identity(const PluginContext& ctx) : Plugin(ctx, "Passes the signal through unchanged") {}

}  // namespace mha::plugins
