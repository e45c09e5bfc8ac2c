#pragma once

#include <cstdint>
#include <vector>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// Band edges in Hz for the given center frequencies: 0, the geometric means
/// of adjacent centers, and srate/2.
std::vector<double> band_edges_hz(const std::vector<double>& centers, double srate);

/// First bin of each band plus one past the last bin (B + 1 entries). Bin k
/// sits at k * srate / fftlen and belongs to the band whose [lower, upper)
/// edge interval contains it; the last band also takes the Nyquist bin.
std::vector<std::int64_t> band_bin_edges(const std::vector<double>& centers, double srate,
                                         std::size_t fftlen);

/// Splits each input channel into B brick-wall bands. Output channel c*B + b
/// is input channel c with every bin outside band b zeroed. Publishes the AC
/// variables `<name>_cf` (centers, Hz) and `<name>_band_bins` (bin edges).
class FftFilterbank : public Plugin {
 public:
  explicit FftFilterbank(const PluginContext& ctx);

  SpecFragment& process(SpecFragment& s) override;

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
  void on_release() override;

 private:
  Variable& f_;
  std::vector<std::int64_t> edges_;
  SpecFragment out_;
};

}  // namespace mha::plugins
