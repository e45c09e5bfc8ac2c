#include "mha/plugins/fftfilterbank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mha/config_lang.hpp"

namespace mha::plugins {

std::vector<double> band_edges_hz(const std::vector<double>& centers, double srate) {
  std::vector<double> edges{0.0};
  for (std::size_t b = 1; b < centers.size(); ++b) edges.push_back(std::sqrt(centers[b - 1] * centers[b]));
  edges.push_back(srate / 2.0);
  return edges;
}

std::vector<std::int64_t> band_bin_edges(const std::vector<double>& centers, double srate,
                                         std::size_t fftlen) {
  const auto hz = band_edges_hz(centers, srate);
  const std::size_t nbins = fftlen / 2 + 1;
  std::vector<std::int64_t> edges;
  edges.push_back(0);
  for (std::size_t b = 1; b + 1 < hz.size(); ++b) {
    std::size_t k = 0;
    while (k < nbins && static_cast<double>(k) * srate / static_cast<double>(fftlen) < hz[b]) ++k;
    edges.push_back(static_cast<std::int64_t>(k));
  }
  edges.push_back(static_cast<std::int64_t>(nbins));
  return edges;
}

FftFilterbank::FftFilterbank(const PluginContext& ctx)
    : Plugin(ctx, "Brick-wall FFT filterbank with band edges at geometric means of adjacent centers"),
      f_(parameter("f", std::vector<double>{250.0, 1000.0, 4000.0}, "Band center frequencies in Hz",
                   NumericRange::parse("]0,inf["), Role::structural)) {}

SignalInfo FftFilterbank::on_prepare(const SignalInfo& in) {
  if (in.domain != Domain::spectrum)
    throw Error(Errc::DomainError, "fftfilterbank can only process spectrum");
  const auto& f = f_.as_vec_real();
  if (f.empty()) throw Error(Errc::ConstraintViolation, "f needs at least one frequency");
  for (std::size_t b = 1; b < f.size(); ++b)
    if (!(f[b] > f[b - 1]))
      throw Error(Errc::NonIncreasingFrequencies, "f must be strictly increasing");
  for (double x : f)
    if (!(x > 0.0 && x < in.srate / 2.0))
      throw Error(Errc::FrequencyOutOfRange, format_real(x) + " Hz is outside (0, srate/2)");

  edges_ = band_bin_edges(f, in.srate, in.fftlen);
  for (std::size_t b = 0; b + 1 < edges_.size(); ++b)
    if (edges_[b + 1] <= edges_[b])
      throw Error(Errc::EmptyBins, "band " + std::to_string(b) + " contains no FFT bins");

  ac().insert(name() + "_cf", f);
  ac().insert(name() + "_band_bins", edges_);
  SignalInfo out = in;
  out.channels = in.channels * f.size();
  out_ = SpecFragment(out.channels, in.num_bins());
  return out;
}

void FftFilterbank::on_release() {
  ac().erase(name() + "_cf");
  ac().erase(name() + "_band_bins");
}

SpecFragment& FftFilterbank::process(SpecFragment& s) {
  const std::size_t bands = edges_.size() - 1;
  for (std::size_t c = 0; c < s.channels(); ++c) {
    auto in = s.channel(c);
    for (std::size_t b = 0; b < bands; ++b) {
      auto o = out_.channel(c * bands + b);
      const auto lo = static_cast<std::size_t>(edges_[b]);
      const auto hi = static_cast<std::size_t>(edges_[b + 1]);
      std::fill(o.begin(), o.begin() + lo, std::complex<float>{});
      std::copy(in.begin() + lo, in.begin() + hi, o.begin() + lo);
      std::fill(o.begin() + hi, o.end(), std::complex<float>{});
    }
  }
  return out_;
}

}  // namespace mha::plugins
