#include "mha/plugins/levelmeter.hpp"

#include <cmath>

namespace mha::plugins {

LevelMeter::LevelMeter(const PluginContext& ctx)
    : Plugin(ctx, "Broadband level meter"),
      level_mon_(monitor("level_db", std::vector<double>{}, "Smoothed level per channel in dB SPL")) {
  level_mon_.on_pre_read([this](Variable& v) {
    std::vector<double> levels;
    if (is_prepared() && level_out_)
      for (std::size_t c = 0; c < power_.size(); ++c) levels.push_back(level_out_[c].load(std::memory_order_relaxed));
    v.set(std::move(levels));
  });
}

SignalInfo LevelMeter::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::waveform) throw Error(Errc::DomainError, "levelmeter: can only process waveform");
  alpha_ = std::exp(-static_cast<double>(in.fragsize) / (in.srate * kTau));
  power_.assign(in.channels, 0.0);
  level_out_ = std::make_unique<std::atomic<double>[]>(in.channels);
  for (std::size_t c = 0; c < in.channels; ++c) level_out_[c].store(kSilenceDb);
  return in;
}

WaveFragment& LevelMeter::process(WaveFragment& s) {
  for (std::size_t c = 0; c < s.channels(); ++c) {
    double acc = 0.0;
    for (float x : s.channel(c)) acc += static_cast<double>(x) * x;
    power_[c] = alpha_ * power_[c] + (1.0 - alpha_) * acc / static_cast<double>(s.frames());
    level_out_[c].store(power_to_spl(power_[c]), std::memory_order_relaxed);
  }
  return s;
}

}  // namespace mha::plugins
