#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// Static compression curve parameters of one band-channel.
struct DcCurve {
  double g50 = 0.0;                  // gain in dB at 50 dB SPL input
  double g80 = 0.0;                  // gain in dB at 80 dB SPL input
  double expansion_threshold = 0.0;  // dB SPL
  double expansion_slope = 1.0;      // output dB per input dB below threshold
  double limiter_threshold = 120.0;  // maximum output level, dB SPL
};

/// Gain in dB for a band level in dB SPL. Linear in dB through (50, g50) and
/// (80, g80); below the expansion threshold the output level falls with
/// expansion_slope; the output level L + G never exceeds limiter_threshold.
double dc_static_gain(double level_db, const DcCurve& c) noexcept;

/// Multi-band dynamic compression on the output of an fftfilterbank.
/// Vectors are indexed channel-major (c * bands + b); a single entry applies
/// to every band-channel.
class DcSimple : public Plugin {
 public:
  explicit DcSimple(const PluginContext& ctx);

  SpecFragment& process(SpecFragment& s) override;

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
  void on_release() override;
  void on_update() override { publish(); }

 private:
  struct Config {
    std::vector<DcCurve> curves;
    std::vector<double> alpha_attack;
    std::vector<double> alpha_decay;
    bool bypass = false;
  };

  std::unique_ptr<const Config> make_config(std::size_t n, const SignalInfo& in) const;
  void publish();

  Variable& g50_;
  Variable& g80_;
  Variable& exp_thr_;
  Variable& exp_slope_;
  Variable& lim_thr_;
  Variable& tau_attack_;
  Variable& tau_decay_;
  Variable& filterbank_;
  Variable& bypass_;
  Variable& level_mon_;

  HandoverCell<Config> cfg_;
  std::vector<std::int64_t> edges_;
  std::size_t bands_ = 1;
  double wnd_energy_ = 1.0;
  std::vector<double> level_;
  bool primed_ = false;
  std::unique_ptr<std::atomic<double>[]> level_out_;
};

}  // namespace mha::plugins
