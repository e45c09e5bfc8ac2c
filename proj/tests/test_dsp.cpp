#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mha/plugins/adm.hpp"
#include "mha/plugins/dc_simple.hpp"
#include "mha/plugins/fftfilterbank.hpp"
#include "support.hpp"

using namespace mha;
using test::Mounted;

namespace {

Errc prepare_error(Mounted& m, const SignalInfo& in) {
  try {
    m->prepare(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "prepare succeeded";
  return Errc::InternalError;
}

std::vector<float> run_wave(Plugin& p, const std::vector<std::vector<float>>& in, std::size_t fragsize,
                            std::size_t out_channel = 0) {
  std::vector<float> out;
  for (auto& f : test::fragments(in, fragsize)) {
    auto& y = p.process(f);
    auto c = y.channel(out_channel);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

std::vector<double> reals(const std::string& text) {
  return std::get<std::vector<double>>(parse_value(text, ValueType::VecReal));
}

double rms_db(const std::vector<float>& x, std::size_t from, std::size_t to) {
  double acc = 0;
  for (std::size_t i = from; i < to; ++i) acc += double(x[i]) * x[i];
  return 10 * std::log10(acc / double(to - from));
}

}  // namespace

// ---- overlapadd -------------------------------------------------------------

struct OlaCase {
  std::size_t fragsize, k, fftlen;
};

class OverlapAddReconstruction : public ::testing::TestWithParam<OlaCase> {};

TEST_P(OverlapAddReconstruction, DelaysByWindowMinusHop) {
  const auto [hop, k, fftlen] = GetParam();
  const std::size_t wnd = k * hop;
  Mounted m("overlapadd");
  m.set("fftlen", std::to_string(fftlen));
  m.set("wnd.len", std::to_string(wnd));
  m.set("plugin_name", "identity");
  m->prepare(test::wave_info(2, hop));
  EXPECT_EQ(m->latency(), wnd - hop);
  const std::size_t n = hop * 400;
  std::vector<std::vector<float>> in{test::white_noise(n, 1, 1.0f), test::white_noise(n, 2, 1.0f)};
  for (std::size_t ch = 0; ch < 2; ++ch) {
    Mounted fresh("overlapadd");
    fresh.set("fftlen", std::to_string(fftlen));
    fresh.set("wnd.len", std::to_string(wnd));
    fresh.set("plugin_name", "identity");
    fresh->prepare(test::wave_info(2, hop));
    auto out = run_wave(*fresh, in, hop, ch);
    double max_err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const float expected = i >= wnd - hop ? in[ch][i - (wnd - hop)] : 0.0f;
      max_err = std::max(max_err, double(std::abs(out[i] - expected)));
    }
    EXPECT_LE(max_err, 1e-5) << "hop " << hop << " K " << k;
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, OverlapAddReconstruction,
                         ::testing::Values(OlaCase{64, 2, 256}, OlaCase{64, 4, 256}, OlaCase{32, 2, 64},
                                           OlaCase{32, 4, 128}, OlaCase{96, 2, 256}, OlaCase{48, 4, 256},
                                           OlaCase{16, 2, 32}));

TEST(OverlapAdd, SilenceInSilenceOut) {
  Mounted m("overlapadd");
  m.set("plugin_name", "identity");
  m->prepare(test::wave_info(1, 64));
  WaveFragment z(1, 64);
  for (int i = 0; i < 10; ++i) {
    auto& y = m->process(z);
    for (float x : y.channel(0)) EXPECT_EQ(x, 0.0f);
  }
}

TEST(OverlapAdd, PrepareConstraints) {
  auto check = [](const char* fftlen, const char* wnd, std::size_t hop, Errc expected) {
    Mounted m("overlapadd");
    m.set("fftlen", fftlen);
    m.set("wnd.len", wnd);
    EXPECT_EQ(prepare_error(m, test::wave_info(1, hop)), expected) << fftlen << " " << wnd << " " << hop;
  };
  check("200", "128", 64, Errc::ConstraintViolation);
  check("128", "256", 64, Errc::ConstraintViolation);
  check("256", "100", 64, Errc::ConstraintViolation);
  check("256", "64", 64, Errc::ConstraintViolation);
  Mounted m("overlapadd");
  m.set("plugin_name", "attenuate20");
  EXPECT_EQ(prepare_error(m, test::wave_info(1, 64)), Errc::DomainError);
}

TEST(OverlapAdd, NoChildPassesSpectrumUnchanged) {
  Mounted m("overlapadd");
  m->prepare(test::wave_info(1, 64));
  auto x = test::white_noise(64 * 20, 3);
  auto y = run_wave(*m, {x}, 64);
  for (std::size_t i = 64; i < y.size(); ++i) EXPECT_NEAR(y[i], x[i - 64], 1e-5);
}

// ---- fftfilterbank ----------------------------------------------------------

TEST(FftFilterbank, EdgesAtGeometricMeans) {
  auto e = plugins::band_edges_hz({250, 1000, 4000}, 44100);
  ASSERT_EQ(e.size(), 4u);
  EXPECT_EQ(e[0], 0.0);
  EXPECT_DOUBLE_EQ(e[1], 500.0);
  EXPECT_DOUBLE_EQ(e[2], 2000.0);
  EXPECT_DOUBLE_EQ(e[3], 22050.0);
}

TEST(FftFilterbank, BinAssignmentMatchesBruteForce) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const double srate = trial % 2 ? 44100.0 : 24000.0;
    const std::size_t fftlen = std::size_t{64} << (rng() % 4);
    std::vector<double> f;
    double last = 0;
    for (unsigned b = 1 + rng() % 5; b > 0; --b) {
      last += std::uniform_real_distribution<double>(50, 3000)(rng);
      if (last < srate / 2) f.push_back(last);
    }
    if (f.empty()) continue;
    auto edges = plugins::band_bin_edges(f, srate, fftlen);
    ASSERT_EQ(edges.size(), f.size() + 1);
    for (std::size_t k = 0; k <= fftlen / 2; ++k) {
      const double hz = double(k) * srate / double(fftlen);
      std::size_t expected = 0;
      for (std::size_t b = 1; b < f.size(); ++b)
        if (hz >= std::sqrt(f[b - 1] * f[b])) expected = b;
      std::size_t got = 0;
      while (!(std::int64_t(k) >= edges[got] && std::int64_t(k) < edges[got + 1])) ++got;
      EXPECT_EQ(got, expected) << "bin " << k;
    }
  }
}

TEST(FftFilterbank, OneKilohertzLandsInMiddleBand) {
  const double srate = 44100;
  const std::size_t fftlen = 256;
  auto edges = plugins::band_bin_edges({250, 1000, 4000}, srate, fftlen);
  const auto k = static_cast<std::int64_t>(std::lround(1000.0 * fftlen / srate));
  EXPECT_GE(k, edges[1]);
  EXPECT_LT(k, edges[2]);
}

TEST(FftFilterbank, ChannelMajorLayoutAndAcKeys) {
  Mounted m("fftfilterbank");
  auto out = m->prepare(test::spec_info(2, 64, 128, 256));
  EXPECT_EQ(out.channels, 6u);
  EXPECT_EQ(m.ac.get<std::vector<double>>("fftfilterbank_cf"), (std::vector<double>{250, 1000, 4000}));
  auto edges = m.ac.get<std::vector<std::int64_t>>("fftfilterbank_band_bins");
  SpecFragment s(2, 129);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t k = 0; k < 129; ++k) s(c, k) = {float(c * 1000 + k), float(k)};
  auto& y = m->process(s);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t k = 0; k < 129; ++k) {
        const bool inside = std::int64_t(k) >= edges[b] && std::int64_t(k) < edges[b + 1];
        EXPECT_EQ(y(c * 3 + b, k), inside ? s(c, k) : std::complex<float>{}) << c << b << k;
      }
  m->release();
  EXPECT_FALSE(m.ac.contains("fftfilterbank_cf"));
}

TEST(FftFilterbank, PrepareErrors) {
  auto err = [](const char* f, std::size_t fftlen) {
    Mounted m("fftfilterbank");
    m.set("f", f);
    return prepare_error(m, test::spec_info(1, 64, 128, fftlen));
  };
  EXPECT_EQ(err("[1000 500]", 256), Errc::NonIncreasingFrequencies);
  EXPECT_EQ(err("[1000 1000]", 256), Errc::NonIncreasingFrequencies);
  EXPECT_EQ(err("[250 30000]", 256), Errc::FrequencyOutOfRange);
  EXPECT_EQ(err("[1000 1010 1020]", 256), Errc::EmptyBins);
}

TEST(FilterbankCombine, UnityPartitionProperty) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> f;
    double last = 100;
    for (unsigned b = 1 + rng() % 6; b > 0; --b) {
      last *= std::uniform_real_distribution<double>(1.6, 3.0)(rng);
      if (last < 20000) f.push_back(last);
    }
    const std::size_t channels = 1 + rng() % 3;
    Mounted m("mhachain");
    m.set("algos", "[fftfilterbank combinechannels]");
    m.set("fftfilterbank.f", format_value(f));
    m.set("combinechannels.outchannels", std::to_string(channels));
    try {
      m->prepare(test::spec_info(channels, 64, 128, 512));
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::EmptyBins);
      continue;
    }
    SpecFragment s(channels, 257);
    std::normal_distribution<float> nd;
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t k = 0; k < 257; ++k) s(c, k) = {nd(rng), k == 0 || k == 256 ? 0.0f : nd(rng)};
    const SpecFragment copy = s;
    EXPECT_EQ(m->process(s), copy);
  }
}

// ---- combinechannels --------------------------------------------------------

TEST(CombineChannels, GroupsAdjacentChannels) {
  Mounted m("combinechannels");
  m.set("outchannels", "2");
  m->prepare(test::wave_info(6, 4));
  WaveFragment f(6, 4);
  for (std::size_t c = 0; c < 6; ++c)
    for (std::size_t k = 0; k < 4; ++k) f(c, k) = float(std::pow(10.0, double(c)));
  auto& y = m->process(f);
  ASSERT_EQ(y.channels(), 2u);
  EXPECT_EQ(y(0, 0), 111.0f);
  EXPECT_EQ(y(1, 3), 111000.0f);
  Mounted bad("combinechannels");
  bad.set("outchannels", "2");
  EXPECT_EQ(prepare_error(bad, test::wave_info(5, 4)), Errc::DivisibilityError);
}

// ---- dc_simple --------------------------------------------------------------

namespace {

// Independent statement of the compression curve as an output-level map:
// a line of slope s_mid = 1 + (g80 - g50)/30 through (50, 50 + g50),
// continued below the threshold with slope expansion_slope, capped at the
// limiter threshold.
double oracle_output_level(double L, const plugins::DcCurve& c) {
  const double s_mid = 1.0 + (c.g80 - c.g50) / 30.0;
  const double out_thr = 50.0 + c.g50 + (c.expansion_threshold - 50.0) * s_mid;
  const double out = L >= c.expansion_threshold ? 50.0 + c.g50 + (L - 50.0) * s_mid
                                                : out_thr - (c.expansion_threshold - L) * c.expansion_slope;
  return std::min(out, c.limiter_threshold);
}

}  // namespace

TEST(DcCurve, AnchorsAndBruteForceSweep) {
  const plugins::DcCurve c{25, 15, 20, 4, 120};
  EXPECT_NEAR(plugins::dc_static_gain(50, c), 25, 1e-12);
  EXPECT_NEAR(plugins::dc_static_gain(80, c), 15, 1e-12);
  std::mt19937 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    plugins::DcCurve r;
    r.g50 = std::uniform_real_distribution<double>(-10, 60)(rng);
    r.g80 = std::uniform_real_distribution<double>(-10, 60)(rng);
    r.expansion_threshold = std::uniform_real_distribution<double>(0, 60)(rng);
    r.expansion_slope = std::uniform_real_distribution<double>(1, 5)(rng);
    r.limiter_threshold = std::uniform_real_distribution<double>(80, 130)(rng);
    double prev_out = -1e9;
    for (int L = -20; L <= 130; ++L) {
      const double out = L + plugins::dc_static_gain(L, r);
      EXPECT_NEAR(out, oracle_output_level(L, r), 1e-9) << L;
      EXPECT_LE(out, r.limiter_threshold + 1e-9);
      if (r.g80 - r.g50 >= -30) {
        EXPECT_GE(out, prev_out - 1e-9) << L;
      }
      prev_out = out;
    }
    // Continuity at the threshold.
    const double t = r.expansion_threshold;
    EXPECT_NEAR(plugins::dc_static_gain(t - 1e-9, r), plugins::dc_static_gain(t, r), 1e-6);
  }
}

TEST(DcCurve, ExpansionAndLimiterExamples) {
  const plugins::DcCurve c{25, 15, 20, 4, 120};
  const double drop = (10 + plugins::dc_static_gain(10, c)) - (20 + plugins::dc_static_gain(20, c));
  EXPECT_NEAR(drop, -40.0, 1e-9);
  const plugins::DcCurve loud{31, 21, 20, 4, 120};
  EXPECT_NEAR(110 + plugins::dc_static_gain(110, loud), 120.0, 1e-9);
}

namespace {

/// fftfilterbank + dc_simple on synthetic spectra with one active bin per
/// band, so the band level is known exactly.
struct DcRig {
  Mounted chain{"mhachain"};
  SignalInfo info = test::spec_info(2, 64, 128, 256);
  std::vector<std::int64_t> edges;
  double we = 0;

  explicit DcRig(const std::vector<std::string>& settings = {}) {
    chain.set("algos", "[fftfilterbank dc_simple]");
    chain.set("dc_simple.g50", "[10 25 40 11 31 55]");
    chain.set("dc_simple.g80", "[5 15 10 5 21 19]");
    chain.set("dc_simple.expansion_threshold", "[20]");
    chain.set("dc_simple.expansion_slope", "[4]");
    chain.set("dc_simple.limiter_threshold", "[120]");
    for (const auto& s : settings) {
      auto eq = s.find('=');
      chain.set(s.substr(0, eq), s.substr(eq + 1));
    }
    chain->prepare(info);
    edges = plugins::band_bin_edges({250, 1000, 4000}, 44100, 256);
    we = window_energy(periodic_hann(128));
  }
  std::size_t bin(std::size_t band) const { return static_cast<std::size_t>((edges[band] + edges[band + 1]) / 2); }
  /// Complex magnitude for a single bin holding `level` dB SPL.
  double magnitude(double level) const { return std::sqrt(spl_to_power(level) * 256.0 * we / 2.0); }
  /// Processes one frame with levels per (channel, band); returns gains in dB.
  std::vector<double> frame(const std::vector<double>& levels) {
    SpecFragment s(2, 129);
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t b = 0; b < 3; ++b) s(c, bin(b)) = {float(magnitude(levels[c * 3 + b])), 0.0f};
    const SpecFragment in = s;
    auto& y = chain->process(s);
    std::vector<double> g;
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t b = 0; b < 3; ++b)
        g.push_back(20 * std::log10(std::abs(y(c * 3 + b, bin(b))) / std::abs(in(c, bin(b)))));
    return g;
  }
};

}  // namespace

TEST(DcSimple, SteadyStateGainsFollowCurve) {
  const std::vector<std::vector<double>> g50{{10, 25, 40, 11, 31, 55}}, g80{{5, 15, 10, 5, 21, 19}};
  for (double level : {30.0, 50.0, 65.0, 80.0, 95.0}) {
    DcRig rig;
    std::vector<double> gains;
    for (int i = 0; i < 400; ++i) gains = rig.frame(std::vector<double>(6, level));
    for (std::size_t j = 0; j < 6; ++j) {
      const plugins::DcCurve c{g50[0][j], g80[0][j], 20, 4, 120};
      EXPECT_NEAR(gains[j], plugins::dc_static_gain(level, c), 1e-3) << "level " << level << " j " << j;
    }
  }
}

TEST(DcSimple, AttackAndDecayInDbDomain) {
  DcRig rig;
  const double hop = 64.0 / 44100.0;
  const double aa = std::exp(-hop / 0.02), ad = std::exp(-hop / 0.1);
  for (int i = 0; i < 5; ++i) rig.frame(std::vector<double>(6, 40.0));
  double expected = 40.0;
  for (int i = 0; i < 30; ++i) {
    rig.frame(std::vector<double>(6, 80.0));
    expected = aa * expected + (1 - aa) * 80.0;
  }
  auto levels = reals(rig.chain.get("dc_simple.level_db"));
  for (double l : levels) EXPECT_NEAR(l, expected, 1e-6);
  for (int i = 0; i < 30; ++i) {
    rig.frame(std::vector<double>(6, 60.0));
    expected = ad * expected + (1 - ad) * 60.0;
  }
  levels = reals(rig.chain.get("dc_simple.level_db"));
  for (double l : levels) EXPECT_NEAR(l, expected, 1e-6);
}

TEST(DcSimple, BypassAppliesUnityButKeepsTracking) {
  DcRig rig({"dc_simple.bypass=yes"});
  std::vector<double> gains;
  for (int i = 0; i < 100; ++i) gains = rig.frame(std::vector<double>(6, 70.0));
  for (double g : gains) EXPECT_NEAR(g, 0.0, 1e-6);
  auto levels = reals(rig.chain.get("dc_simple.level_db"));
  for (double l : levels) EXPECT_NEAR(l, 70.0, 1e-3);
  rig.chain.set("dc_simple.bypass", "no");
  gains = rig.frame(std::vector<double>(6, 70.0));
  EXPECT_NEAR(gains[1], plugins::dc_static_gain(70, {25, 15, 20, 4, 120}), 1e-3);
}

TEST(DcSimple, PrepareErrors) {
  {
    Mounted m("mhachain");
    m.set("algos", "[fftfilterbank dc_simple]");
    m.set("dc_simple.g50", "[20 20 20 20 20]");
    EXPECT_EQ(prepare_error(m, test::spec_info(2, 64, 128, 256)), Errc::VectorLengthMismatch);
  }
  {
    Mounted m("mhachain");
    m.set("algos", "[fftfilterbank dc_simple]");
    m.set("dc_simple.filterbank", "other");
    EXPECT_EQ(prepare_error(m, test::spec_info(2, 64, 128, 256)), Errc::MissingACKey);
  }
  {
    Mounted m("mhachain");
    m.set("algos", "[fftfilterbank dc_simple]");
    m->prepare(test::spec_info(2, 64, 128, 256));
    EXPECT_THROW(m.set("dc_simple.g80", "[1 2]"), Error);
    EXPECT_EQ(m.get("dc_simple.g80"), "[0]");
  }
}

// ---- adm --------------------------------------------------------------------

TEST(Adm, EqualizerUnityAtOneKilohertz) {
  const double srate = 44100, delay = 0.0155 / 340 * srate;
  const double a = std::exp(-2 * std::numbers::pi * 50 / srate);
  const double w0 = 2 * std::numbers::pi * 1000 / srate;
  const double b = 1.0 / plugins::Adm::on_axis_gain(w0, delay, a, 1.0);
  EXPECT_NEAR(plugins::Adm::on_axis_gain(w0, delay, a, b), 1.0, 1e-12);
  // The independent form: |1 - e^{-j w 2 tau}| * b / |1 - a e^{-j w}|.
  const std::complex<double> z = std::polar(1.0, -w0);
  const double direct = std::abs(1.0 - std::pow(z, 2 * delay)) * b / std::abs(1.0 - a * z);
  EXPECT_NEAR(direct, 1.0, 1e-9);
}

TEST(Adm, BypassOutputsFrontChannels) {
  Mounted m("adm");
  m.set("pairs", "[0 1 3 2]");
  m.set("bypass", "yes");
  m->prepare(test::wave_info(4, 64));
  std::vector<std::vector<float>> in;
  for (std::uint32_t c = 0; c < 4; ++c) in.push_back(test::white_noise(64 * 10, c + 1, 0.1f));
  EXPECT_EQ(run_wave(*m, in, 64, 0), in[0]);
  Mounted m2("adm");
  m2.set("pairs", "[0 1 3 2]");
  m2.set("bypass", "yes");
  m2->prepare(test::wave_info(4, 64));
  EXPECT_EQ(run_wave(*m2, in, 64, 1), in[3]);
}

TEST(Adm, BetaStaysInUnitIntervalProperty) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Mounted m("adm");
    m.set("mu", format_real(std::uniform_real_distribution<double>(0, 2)(rng)));
    m.set("beta_init", format_real(std::uniform_real_distribution<double>(0, 1)(rng)));
    m->prepare(test::wave_info(2, 32));
    const float amp = std::uniform_real_distribution<float>(1e-6f, 10.0f)(rng);
    for (int i = 0; i < 200; ++i) {
      WaveFragment f(2, 32);
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t k = 0; k < 32; ++k)
          f(c, k) = rng() % 7 == 0 ? 0.0f : std::uniform_real_distribution<float>(-amp, amp)(rng);
      auto& y = m->process(f);
      for (float x : y.channel(0)) ASSERT_TRUE(std::isfinite(x));
      for (double b : reals(m.get("beta"))) {
        ASSERT_GE(b, 0.0);
        ASSERT_LE(b, 1.0);
      }
    }
  }
}

TEST(Adm, BroadsideSignalKeepsBothCardioidsActive) {
  Mounted m("adm");
  m.set("mu", "0");
  m->prepare(test::wave_info(2, 64));
  auto x = test::white_noise(64 * 50, 5, 0.1f);
  auto y = run_wave(*m, {x, x}, 64);
  // Identical mic signals: y = (1 - beta) (x - D x), not zero for beta = 0.5.
  EXPECT_GT(rms_db(y, 64 * 10, y.size()), rms_db(x, 0, x.size()) - 40);
}

TEST(Adm, PairValidation) {
  for (const char* pairs : {"[0]", "[0 0]", "[0 5]", "[0 1 1 2]", "[]"}) {
    Mounted m("adm");
    m.set("pairs", pairs);
    EXPECT_EQ(prepare_error(m, test::wave_info(4, 64)), Errc::BadPairIndices) << pairs;
  }
  Mounted m("adm");
  EXPECT_EQ(prepare_error(m, test::spec_info(2, 64, 128, 256)), Errc::DomainError);
}

// ---- attenuate20, gain, siggen, levelmeter, transducers ---------------------

TEST(Attenuate20, ScalesByTenth) {
  Mounted m("attenuate20");
  m->prepare(test::wave_info(1, 4));
  WaveFragment f(1, 4);
  f.fill(1.0f);
  for (float x : m->process(f).channel(0)) EXPECT_EQ(x, 0.1f);
  Mounted s("attenuate20");
  try {
    s->prepare(test::spec_info(1, 64, 128, 256));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("can only process waveform"), std::string::npos);
  }
}

TEST(Gain, HalvesAmplitudeAndChecksLength) {
  Mounted m("gain");
  m.set("gains", "[-6.0206]");
  m->prepare(test::wave_info(2, 4));
  WaveFragment f(2, 4);
  f.fill(1.0f);
  for (float x : m->process(f).channel(1)) EXPECT_NEAR(x, 0.5f, 1e-5f);
  Mounted bad("gain");
  bad.set("gains", "[1 2 3]");
  EXPECT_EQ(prepare_error(bad, test::wave_info(2, 4)), Errc::VectorLengthMismatch);
}

TEST(SigGen, SineLevelOnMeter) {
  Mounted m("mhachain");
  m.set("algos", "[siggen levelmeter]");
  m.set("siggen.mode", "sine");
  m.set("siggen.freq", "1000");
  m.set("siggen.level", "60");
  m->prepare(test::wave_info(2, 64));
  WaveFragment f(2, 64);
  for (int i = 0; i < 44100 * 2 / 64; ++i) {
    f.fill(0.0f);
    m->process(f);
  }
  for (double l : reals(m.get("levelmeter.level_db")))
    EXPECT_NEAR(l, 60.0, 0.2);
}

TEST(SigGen, NoiseLevelMatches) {
  Mounted m("siggen");
  m.set("mode", "noise");
  m.set("level", "70");
  m->prepare(test::wave_info(1, 64));
  std::vector<float> all;
  for (int i = 0; i < 2000; ++i) {
    WaveFragment f(1, 64);
    auto c = m->process(f).channel(0);
    all.insert(all.end(), c.begin(), c.end());
  }
  EXPECT_NEAR(power_to_spl(std::pow(10.0, rms_db(all, 0, all.size()) / 10)), 70.0, 0.1);
}

TEST(SigGen, OffIsExactPassThrough) {
  Mounted m("siggen");
  m->prepare(test::wave_info(1, 64));
  auto x = test::white_noise(64 * 4, 6);
  EXPECT_EQ(run_wave(*m, {x}, 64), x);
}

TEST(SigGen, PhaseContinuousAcrossFragments) {
  auto render = [](std::size_t fragsize) {
    Mounted m("siggen");
    m.set("mode", "sine");
    m.set("freq", "441.7");
    m->prepare(test::wave_info(1, fragsize));
    return run_wave(*m, {std::vector<float>(256, 0.0f)}, fragsize);
  };
  EXPECT_EQ(render(64), render(128));
  EXPECT_EQ(render(64), render(256));
}

TEST(SigGen, FrequencyMustBeBelowNyquist) {
  Mounted m("siggen");
  m.set("mode", "sine");
  m.set("freq", "30000");
  EXPECT_EQ(prepare_error(m, test::wave_info(1, 64, 44100)), Errc::RangeViolation);
  m.set("freq", "1000");
  m->prepare(test::wave_info(1, 64, 44100));
  EXPECT_THROW(m.set("freq", "22050"), Error);
  EXPECT_EQ(m.get("freq"), "1000");
  EXPECT_THROW(m.set("freq", "-5"), Error);
}

TEST(LevelMeter, DifferenceAcrossAttenuate20) {
  Mounted before("levelmeter"), att("attenuate20"), after("levelmeter");
  for (Mounted* p : {&before, &att, &after}) (*p)->prepare(test::wave_info(1, 64));
  auto x = test::sine(64 * 1000, 1000, 44100, 0.5);
  for (auto& f : test::fragments({x}, 64)) after->process(att->process(before->process(f)));
  const double lb = reals(before.get("level_db"))[0];
  const double la = reals(after.get("level_db"))[0];
  EXPECT_NEAR(lb - la, 20.0, 0.01);
}

TEST(Transducers, CalibrationConventions) {
  Mounted m("transducers");
  m.set("calib_in.peaklevel", "[93.9794000867]");
  m.set("plugin_name", "levelmeter");
  m->prepare(test::wave_info(1, 64));
  WaveFragment f(1, 64);
  for (int i = 0; i < 1000; ++i) {
    f.fill(0.5f);
    m->process(f);
  }
  const double l = reals(m.get("levelmeter.level_db"))[0];
  EXPECT_NEAR(l, 20 * std::log10(0.5 / 2e-5), 1e-3);
}

TEST(Transducers, NetGainAndClipping) {
  Mounted m("transducers");
  m.set("calib_in.peaklevel", "[116 116]");
  m.set("calib_out.peaklevel", "[114 114]");
  m.set("plugin_name", "identity");
  m->prepare(test::wave_info(2, 8));
  WaveFragment f(2, 8);
  f.fill(0.25f);
  f(1, 0) = 0.9f;
  auto& y = m->process(f);
  EXPECT_NEAR(y(0, 3), 0.25 * std::pow(10.0, 2.0 / 20), 1e-6);
  EXPECT_EQ(y(1, 0), 1.0f);
  EXPECT_EQ(m.get("calib_out.clipped"), "1");
  Mounted same("transducers");
  same.set("plugin_name", "identity");
  same->prepare(test::wave_info(1, 8));
  WaveFragment g(1, 8);
  g.fill(-0.3f);
  EXPECT_NEAR(same->process(g)(0, 0), -0.3f, 1e-7);
  Mounted bad("transducers");
  bad.set("calib_in.peaklevel", "[1 2 3]");
  EXPECT_EQ(prepare_error(bad, test::wave_info(2, 8)), Errc::VectorLengthMismatch);
}
