#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mha/config_lang.hpp"
#include "mha/engine.hpp"
#include "mha/plugin.hpp"

namespace mha::test {

inline std::filesystem::path config_dir() { return std::filesystem::path(MHA_SOURCE_DIR) / "configs"; }
inline std::filesystem::path golden_dir() { return std::filesystem::path(MHA_SOURCE_DIR) / "tests" / "golden"; }

/// Fresh scratch directory below the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mha_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// A plugin mounted directly at the root of its own tree.
struct Mounted {
  Namespace root;
  ACSpace ac;
  std::unique_ptr<Plugin> plugin;

  explicit Mounted(const std::string& name, const PluginRegistry& reg = default_registry()) {
    plugin = reg.create(name, root, ac);
  }
  void set(const std::string& path, const std::string& value) { assign(root, NodePath::parse(path), value); }
  std::string get(const std::string& path) { return query(root, NodePath::parse(path)); }
  Plugin& operator*() { return *plugin; }
  Plugin* operator->() { return plugin.get(); }
};

inline SignalInfo wave_info(std::size_t channels, std::size_t fragsize, double srate = 44100.0) {
  SignalInfo s;
  s.channels = channels;
  s.domain = Domain::waveform;
  s.fragsize = fragsize;
  s.srate = srate;
  return s;
}

inline SignalInfo spec_info(std::size_t channels, std::size_t fragsize, std::size_t wndlen, std::size_t fftlen,
                            double srate = 44100.0) {
  SignalInfo s = wave_info(channels, fragsize, srate);
  s.domain = Domain::spectrum;
  s.wndlen = wndlen;
  s.fftlen = fftlen;
  return s;
}

inline std::vector<float> white_noise(std::size_t n, std::uint32_t seed, float amplitude = 0.5f) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> d(-amplitude, amplitude);
  std::vector<float> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

inline std::vector<float> sine(std::size_t n, double freq, double srate, double amplitude) {
  std::vector<float> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = static_cast<float>(amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / srate));
  return x;
}

/// Splits channel signals (all of equal length, a multiple of fragsize)
/// into fragments.
inline std::vector<WaveFragment> fragments(const std::vector<std::vector<float>>& channels, std::size_t fragsize) {
  std::vector<WaveFragment> out;
  const std::size_t n = channels.front().size();
  for (std::size_t start = 0; start + fragsize <= n; start += fragsize) {
    WaveFragment f(channels.size(), fragsize);
    for (std::size_t c = 0; c < channels.size(); ++c)
      for (std::size_t k = 0; k < fragsize; ++k) f(c, k) = channels[c][start + k];
    out.push_back(std::move(f));
  }
  return out;
}

/// Concatenates one channel of a fragment sequence.
inline std::vector<float> join(const std::vector<WaveFragment>& frags, std::size_t channel) {
  std::vector<float> out;
  for (const auto& f : frags) {
    auto c = f.channel(channel);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

inline void expect_ok(const Response& r, const std::string& what = {}) {
  EXPECT_TRUE(r.is_ok()) << what << ": " << (r.error ? to_string(*r.error) : "") << " " << r.message;
}

inline void run_lines(Engine& e, const std::vector<std::string>& lines) {
  for (const auto& l : lines) expect_ok(e.execute(l), l);
}

/// Loads a shipped config and swaps its file IO for in-memory test IO.
inline void load_with_test_io(Engine& e, const std::string& cfg) {
  expect_ok(e.read_file(config_dir() / cfg), cfg);
  expect_ok(e.execute("iolib = test"));
}

}  // namespace mha::test
