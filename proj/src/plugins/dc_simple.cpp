#include "mha/plugins/dc_simple.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mha/plugins/util.hpp"

namespace mha::plugins {

namespace {
// Band levels below this are treated as this level by the smoother, so an
// onset after digital silence is not delayed by the silence sentinel.
constexpr double kLevelFloorDb = -20.0;
}  // namespace

double dc_static_gain(double level_db, const DcCurve& c) noexcept {
  const double slope = (c.g80 - c.g50) / 30.0;
  auto interp = [&](double l) { return c.g50 + (l - 50.0) * slope; };
  double g = level_db >= c.expansion_threshold
                 ? interp(level_db)
                 : interp(c.expansion_threshold) + (level_db - c.expansion_threshold) * (c.expansion_slope - 1.0);
  return std::min(g, c.limiter_threshold - level_db);
}

DcSimple::DcSimple(const PluginContext& ctx)
    : Plugin(ctx, "Multi-band dynamic range compressor with expansion and limiter"),
      g50_(parameter("g50", std::vector<double>{0.0}, "Gain at 50 dB SPL in dB")),
      g80_(parameter("g80", std::vector<double>{0.0}, "Gain at 80 dB SPL in dB")),
      exp_thr_(parameter("expansion_threshold", std::vector<double>{20.0},
                         "Threshold of noise gate in dB SPL")),
      exp_slope_(parameter("expansion_slope", std::vector<double>{1.0},
                           "Slope of level mapping below noise gate", NumericRange::parse("[1,inf["))),
      lim_thr_(parameter("limiter_threshold", std::vector<double>{120.0},
                         "Limiter threshold, maximum possible output level, in dB SPL")),
      tau_attack_(parameter("tau_attack", std::vector<double>{0.02}, "Attack time constant in s",
                            NumericRange::parse("]0,inf["))),
      tau_decay_(parameter("tau_decay", std::vector<double>{0.1}, "Decay time constant in s",
                           NumericRange::parse("]0,inf["))),
      filterbank_(parameter("filterbank", std::string{"fftfilterbank"},
                            "Name of fftfilterbank plugin, used to extract frequency information", {},
                            Role::structural)),
      bypass_(parameter("bypass", false, "Apply unity gain (level estimation continues)")),
      level_mon_(monitor("level_db", std::vector<double>{}, "Smoothed band levels in dB SPL")) {
  level_mon_.on_pre_read([this](Variable& v) {
    std::vector<double> levels;
    if (is_prepared() && level_out_)
      for (std::size_t j = 0; j < level_.size(); ++j) levels.push_back(level_out_[j].load(std::memory_order_relaxed));
    v.set(std::move(levels));
  });
}

std::unique_ptr<const DcSimple::Config> DcSimple::make_config(std::size_t n, const SignalInfo& in) const {
  auto g50 = broadcast(g50_.as_vec_real(), n, "g50");
  auto g80 = broadcast(g80_.as_vec_real(), n, "g80");
  auto thr = broadcast(exp_thr_.as_vec_real(), n, "expansion_threshold");
  auto slope = broadcast(exp_slope_.as_vec_real(), n, "expansion_slope");
  auto lim = broadcast(lim_thr_.as_vec_real(), n, "limiter_threshold");
  auto ta = broadcast(tau_attack_.as_vec_real(), n, "tau_attack");
  auto td = broadcast(tau_decay_.as_vec_real(), n, "tau_decay");
  auto c = std::make_unique<Config>();
  const double hop_s = static_cast<double>(in.fragsize) / in.srate;
  for (std::size_t j = 0; j < n; ++j) {
    c->curves.push_back({g50[j], g80[j], thr[j], slope[j], lim[j]});
    c->alpha_attack.push_back(std::exp(-hop_s / ta[j]));
    c->alpha_decay.push_back(std::exp(-hop_s / td[j]));
  }
  c->bypass = bypass_.as_bool();
  return c;
}

void DcSimple::publish() {
  cfg_.publish(make_config(level_.size(), input_info()));
  cfg_.reclaim();
}

SignalInfo DcSimple::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::spectrum) throw Error(Errc::DomainError, "dc_simple can only process spectrum");
  const std::string key = filterbank_.as_text() + "_band_bins";
  edges_ = ac().get<std::vector<std::int64_t>>(key);
  if (edges_.size() < 2) throw Error(Errc::MissingACKey, key + " holds no bands");
  bands_ = edges_.size() - 1;
  if (in.channels % bands_ != 0)
    throw Error(Errc::VectorLengthMismatch, std::to_string(in.channels) + " channels do not hold " +
                                                std::to_string(bands_) + " bands per channel");
  const auto w = periodic_hann(in.wndlen);
  wnd_energy_ = window_energy(w);
  cfg_.reset();
  cfg_.publish(make_config(in.channels, in));
  level_.assign(in.channels, 0.0);
  primed_ = false;
  level_out_ = std::make_unique<std::atomic<double>[]>(in.channels);
  for (std::size_t j = 0; j < in.channels; ++j) level_out_[j].store(kSilenceDb);
  return in;
}

void DcSimple::on_release() { cfg_.reset(); }

SpecFragment& DcSimple::process(SpecFragment& s) {
  const Config& c = *cfg_.acquire();
  const std::size_t fftlen = input_info().fftlen;
  for (std::size_t j = 0; j < s.channels(); ++j) {
    const std::size_t b = j % bands_;
    const BinRange bins{static_cast<std::size_t>(edges_[b]), static_cast<std::size_t>(edges_[b + 1])};
    const double raw = std::max(power_to_spl(spec_band_rms(s, j, bins, wnd_energy_, fftlen)), kLevelFloorDb);
    double& level = level_[j];
    if (!primed_) {
      level = raw;
    } else {
      const double a = raw > level ? c.alpha_attack[j] : c.alpha_decay[j];
      level = a * level + (1.0 - a) * raw;
    }
    level_out_[j].store(level, std::memory_order_relaxed);
    if (c.bypass) continue;
    const auto gain = static_cast<float>(std::pow(10.0, dc_static_gain(level, c.curves[j]) / 20.0));
    auto x = s.channel(j);
    for (std::size_t k = bins.begin; k < bins.end; ++k) x[k] *= gain;
  }
  primed_ = true;
  return s;
}

}  // namespace mha::plugins
