#include "mha/plugins/combinechannels.hpp"

#include <string>

namespace mha::plugins {

CombineChannels::CombineChannels(const PluginContext& ctx)
    : Plugin(ctx, "Sums groups of adjacent channels into outchannels channels"),
      outchannels_(parameter("outchannels", std::int64_t{1}, "Number of output channels",
                             NumericRange::parse("[1,inf["), Role::structural)) {}

SignalInfo CombineChannels::on_prepare(const SignalInfo& in) {
  const auto out_ch = static_cast<std::size_t>(outchannels_.as_int());
  if (in.channels % out_ch != 0)
    throw Error(Errc::DivisibilityError, std::to_string(in.channels) + " input channels cannot be split into " +
                                             std::to_string(out_ch) + " groups");
  group_ = in.channels / out_ch;
  SignalInfo out = in;
  out.channels = out_ch;
  if (in.domain == Domain::waveform) {
    wave_ = WaveFragment(out_ch, in.fragsize);
    spec_ = SpecFragment();
  } else {
    spec_ = SpecFragment(out_ch, in.num_bins());
    wave_ = WaveFragment();
  }
  return out;
}

}  // namespace mha::plugins
