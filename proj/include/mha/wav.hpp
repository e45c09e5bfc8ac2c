#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "mha/signal.hpp"

namespace mha {

enum class SampleFormat { pcm16, float32 };

struct WavInfo {
  SampleFormat format = SampleFormat::float32;
  std::size_t channels = 0;
  std::uint32_t srate = 0;
  std::size_t frames = 0;
  std::size_t data_offset = 0;  // byte offset of the first sample
};

/// Parses a RIFF/WAVE header. Accepts 16-bit PCM and 32-bit IEEE float
/// (plain or WAVE_FORMAT_EXTENSIBLE); unknown chunks are skipped.
/// Throws UnsupportedFormat or CorruptHeader.
WavInfo wav_read_header(std::span<const std::byte> bytes);

/// Streaming reader. PCM16 samples map to digital full scale via x / 32768.
class WavReader {
 public:
  explicit WavReader(const std::filesystem::path& path);

  const WavInfo& info() const noexcept { return info_; }
  /// Fills `frag` (channels must match) with the next frames, zero-padding a
  /// short final block. Returns the number of frames read from the file.
  std::size_t read(WaveFragment& frag);

 private:
  std::ifstream in_;
  WavInfo info_;
  std::size_t remaining_ = 0;
  std::vector<char> buf_;
};

/// Streaming float32 writer; the RIFF sizes are patched by close().
class WavWriter {
 public:
  WavWriter(const std::filesystem::path& path, std::size_t channels, std::uint32_t srate);
  ~WavWriter();
  WavWriter(const WavWriter&) = delete;
  WavWriter& operator=(const WavWriter&) = delete;

  void write(const WaveFragment& frag);
  void close();
  std::size_t frames() const noexcept { return frames_; }

 private:
  std::ofstream out_;
  std::size_t channels_;
  std::size_t frames_ = 0;
  std::vector<float> buf_;
};

/// Whole-file helpers; audio is returned as channels x frames.
struct WavData {
  WavInfo info;
  WaveFragment audio;
};
WavData read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const WaveFragment& audio, std::uint32_t srate);

}  // namespace mha
