#include "mha/plugins/siggen.hpp"

#include <cmath>
#include <numbers>

#include "mha/config_lang.hpp"

namespace mha::plugins {

namespace {
constexpr std::uint32_t kNoiseSeed = 5489u;
}

SigGen::SigGen(const PluginContext& ctx)
    : Plugin(ctx, "Signal generator adding a pure tone or white noise to the input"),
      mode_(parameter("mode", Keyword{"off"}, "Signal type", KeywordSet{{"off", "sine", "noise"}})),
      freq_(parameter("freq", 1000.0, "Sine frequency in Hz", NumericRange::parse("]0,inf["))),
      level_(parameter("level", 60.0, "Level in dB SPL (rms)")) {}

std::unique_ptr<const SigGen::Config> SigGen::make_config(double srate) const {
  auto c = std::make_unique<Config>();
  const std::string& m = mode_.as_text();
  c->mode = m == "sine" ? Mode::sine : m == "noise" ? Mode::noise : Mode::off;
  const double f = freq_.as_real();
  if (c->mode == Mode::sine && f >= srate / 2.0)
    throw Error(Errc::RangeViolation, "freq " + format_real(f) + " is not below the Nyquist frequency");
  c->phase_inc = 2.0 * std::numbers::pi * f / srate;
  const double rms = kRefPressure * std::pow(10.0, level_.as_real() / 20.0);
  c->amplitude = static_cast<float>((c->mode == Mode::sine ? std::sqrt(2.0) : std::sqrt(3.0)) * rms);
  return c;
}

SignalInfo SigGen::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::waveform) throw Error(Errc::DomainError, "siggen: can only process waveform");
  cfg_.reset();
  cfg_.publish(make_config(in.srate));
  phase_ = 0.0;
  rng_.seed(kNoiseSeed);
  return in;
}

void SigGen::on_update() {
  cfg_.publish(make_config(input_info().srate));
  cfg_.reclaim();
}

WaveFragment& SigGen::process(WaveFragment& s) {
  const Config& c = *cfg_.acquire();
  if (c.mode == Mode::off) return s;
  std::uniform_real_distribution<float> uni(-1.0f, 1.0f);
  for (std::size_t n = 0; n < s.frames(); ++n) {
    float v;
    if (c.mode == Mode::sine) {
      v = c.amplitude * static_cast<float>(std::sin(phase_));
      phase_ += c.phase_inc;
      if (phase_ >= 2.0 * std::numbers::pi) phase_ -= 2.0 * std::numbers::pi;
    } else {
      v = c.amplitude * uni(rng_);
    }
    for (std::size_t ch = 0; ch < s.channels(); ++ch) s(ch, n) += v;
  }
  return s;
}

}  // namespace mha::plugins
