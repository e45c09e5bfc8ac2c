#include "mha/plugins/adm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <string>

#include "mha/config_lang.hpp"

namespace mha::plugins {

namespace {
constexpr double kEqCornerHz = 50.0;
constexpr double kEqReferenceHz = 1000.0;
constexpr double kPowerTau = 0.05;  // s
constexpr double kEpsilon = 1e-10;
}  // namespace

double Adm::on_axis_gain(double omega, double delay_samples, double eq_a, double eq_b) noexcept {
  const std::complex<double> z = std::polar(1.0, -omega);
  const double diff = 2.0 * std::abs(std::sin(omega * delay_samples));
  return diff * eq_b / std::abs(1.0 - eq_a * z);
}

Adm::Adm(const PluginContext& ctx)
    : Plugin(ctx, "Adaptive differential microphone; one output per (front, back) channel pair"),
      pairs_(parameter("pairs", std::vector<std::int64_t>{0, 1},
                       "Flat list of (front back) input channel index pairs", NumericRange::parse("[0,inf["),
                       Role::structural)),
      distance_(parameter("distance", 0.0155, "Microphone distance in m", NumericRange::parse("]0,1]"))),
      c_sound_(parameter("c_sound", 340.0, "Speed of sound in m/s", NumericRange::parse("]0,inf["))),
      mu_(parameter("mu", 1e-3, "Normalized adaptation step size", NumericRange::parse("[0,2]"))),
      beta_init_(parameter("beta_init", 0.5, "Initial rear-cancellation coefficient",
                           NumericRange::parse("[0,1]"), Role::structural)),
      bypass_(parameter("bypass", false, "Output the front microphones unmodified")),
      beta_mon_(monitor("beta", std::vector<double>{}, "Current beta per pair")) {
  beta_mon_.on_pre_read([this](Variable& v) {
    std::vector<double> betas;
    if (is_prepared() && beta_out_)
      for (std::size_t p = 0; p < state_.size(); ++p) betas.push_back(beta_out_[p].load(std::memory_order_relaxed));
    v.set(std::move(betas));
  });
}

std::unique_ptr<const Adm::Config> Adm::make_config(double srate) const {
  const double delay = distance_.as_real() / c_sound_.as_real() * srate;
  if (delay + 2.0 >= static_cast<double>(kHistory))
    throw Error(Errc::RangeViolation, "microphone delay of " + format_real(delay) + " samples is too long");
  auto c = std::make_unique<Config>();
  c->delay_int = static_cast<std::size_t>(std::floor(delay));
  c->delay_frac = static_cast<float>(delay - std::floor(delay));
  c->mu = static_cast<float>(mu_.as_real());
  const double a = std::exp(-2.0 * std::numbers::pi * kEqCornerHz / srate);
  const double w0 = 2.0 * std::numbers::pi * kEqReferenceHz / srate;
  c->eq_a = static_cast<float>(a);
  c->eq_b = static_cast<float>(1.0 / on_axis_gain(w0, delay, a, 1.0));
  c->bypass = bypass_.as_bool();
  return c;
}

void Adm::publish() {
  cfg_.publish(make_config(input_info().srate));
  cfg_.reclaim();
}

SignalInfo Adm::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::waveform) throw Error(Errc::DomainError, "adm can only process waveform");
  const auto& idx = pairs_.as_vec_int();
  if (idx.empty() || idx.size() % 2 != 0)
    throw Error(Errc::BadPairIndices, "pairs needs an even, non-zero number of channel indices");
  std::set<std::int64_t> seen;
  for (auto i : idx) {
    if (i < 0 || static_cast<std::size_t>(i) >= in.channels)
      throw Error(Errc::BadPairIndices, "channel index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second) throw Error(Errc::BadPairIndices, "channel index " + std::to_string(i) + " repeated");
  }
  cfg_.reset();
  cfg_.publish(make_config(in.srate));

  state_.clear();
  for (std::size_t p = 0; p < idx.size() / 2; ++p) {
    PairState st;
    st.front = static_cast<std::size_t>(idx[2 * p]);
    st.back = static_cast<std::size_t>(idx[2 * p + 1]);
    st.beta = beta_init_.as_real();
    state_.push_back(st);
  }
  beta_out_ = std::make_unique<std::atomic<float>[]>(state_.size());
  for (std::size_t p = 0; p < state_.size(); ++p) beta_out_[p].store(static_cast<float>(state_[p].beta));
  history_ = WaveFragment(in.channels, kHistory);
  pos_ = 0;
  power_alpha_ = std::exp(-1.0 / (in.srate * kPowerTau));
  out_ = WaveFragment(state_.size(), in.fragsize);

  SignalInfo out = in;
  out.channels = state_.size();
  return out;
}

WaveFragment& Adm::process(WaveFragment& s) {
  const Config& c = *cfg_.acquire();
  constexpr std::size_t mask = kHistory - 1;
  const float frac = c.delay_frac;
  auto delayed = [&](std::size_t ch) {
    auto h = history_.channel(ch);
    const float x0 = h[(pos_ - c.delay_int) & mask];
    const float x1 = h[(pos_ - c.delay_int - 1) & mask];
    return (1.0f - frac) * x0 + frac * x1;
  };
  for (std::size_t n = 0; n < s.frames(); ++n) {
    pos_ = (pos_ + 1) & mask;
    for (std::size_t ch = 0; ch < s.channels(); ++ch) history_(ch, pos_) = s(ch, n);
    for (std::size_t p = 0; p < state_.size(); ++p) {
      PairState& st = state_[p];
      const double xf = s(st.front, n);
      const double xb = s(st.back, n);
      const double cf = xf - delayed(st.back);
      const double cb = xb - delayed(st.front);
      const double y = cf - st.beta * cb;
      st.power = power_alpha_ * st.power + (1.0 - power_alpha_) * cb * cb;
      st.beta = std::clamp(st.beta + c.mu * y * cb / (kEpsilon + st.power), 0.0, 1.0);
      st.eq_state = c.eq_b * y + c.eq_a * st.eq_state;
      out_(p, n) = c.bypass ? static_cast<float>(xf) : static_cast<float>(st.eq_state);
    }
  }
  for (std::size_t p = 0; p < state_.size(); ++p)
    beta_out_[p].store(static_cast<float>(state_[p].beta), std::memory_order_relaxed);
  return out_;
}

}  // namespace mha::plugins
