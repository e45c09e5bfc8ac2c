#include "mha/wav.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <sstream>
#include <string>

#include "mha/error.hpp"

namespace mha {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put32(std::ostream& o, std::uint32_t v) {
  const char b[4] = {char(v & 0xff), char(v >> 8 & 0xff), char(v >> 16 & 0xff), char(v >> 24 & 0xff)};
  o.write(b, 4);
}
void put16(std::ostream& o, std::uint16_t v) {
  const char b[2] = {char(v & 0xff), char(v >> 8 & 0xff)};
  o.write(b, 2);
}

bool read_exact(std::istream& in, unsigned char* dst, std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

WavInfo parse_header(std::istream& in) {
  unsigned char riff[12];
  if (!read_exact(in, riff, 12)) throw Error(Errc::CorruptHeader, "file too short for a RIFF header");
  if (std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(riff + 8, "WAVE", 4) != 0)
    throw Error(Errc::CorruptHeader, "not a RIFF/WAVE file");
  WavInfo info;
  bool have_fmt = false;
  std::size_t pos = 12;
  for (;;) {
    unsigned char hdr[8];
    if (!read_exact(in, hdr, 8)) throw Error(Errc::CorruptHeader, "missing data chunk");
    pos += 8;
    const std::uint32_t size = le32(hdr + 4);
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size < 16) throw Error(Errc::CorruptHeader, "fmt chunk too short");
      std::vector<unsigned char> fmt(size);
      if (!read_exact(in, fmt.data(), size)) throw Error(Errc::CorruptHeader, "truncated fmt chunk");
      std::uint16_t tag = le16(&fmt[0]);
      info.channels = le16(&fmt[2]);
      info.srate = le32(&fmt[4]);
      const std::uint16_t bits = le16(&fmt[14]);
      if (tag == kFormatExtensible) {
        if (size < 40) throw Error(Errc::CorruptHeader, "extensible fmt chunk too short");
        tag = le16(&fmt[24]);
      }
      if (tag == kFormatPcm && bits == 16)
        info.format = SampleFormat::pcm16;
      else if (tag == kFormatFloat && bits == 32)
        info.format = SampleFormat::float32;
      else
        throw Error(Errc::UnsupportedFormat,
                    "unsupported sample format (tag " + std::to_string(tag) + ", " + std::to_string(bits) + " bit)");
      if (info.channels == 0) throw Error(Errc::CorruptHeader, "zero channels");
      if (info.srate == 0) throw Error(Errc::CorruptHeader, "zero sample rate");
      have_fmt = true;
      pos += size;
      if (size % 2) {
        in.ignore(1);
        ++pos;
      }
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (!have_fmt) throw Error(Errc::CorruptHeader, "data chunk before fmt chunk");
      const std::size_t frame_bytes = info.channels * (info.format == SampleFormat::pcm16 ? 2 : 4);
      info.frames = size / frame_bytes;
      info.data_offset = pos;
      return info;
    } else {
      const std::size_t skip = size + (size % 2);
      in.ignore(static_cast<std::streamsize>(skip));
      if (!in) throw Error(Errc::CorruptHeader, "truncated chunk");
      pos += skip;
    }
  }
}

}  // namespace

WavInfo wav_read_header(std::span<const std::byte> bytes) {
  std::istringstream in(std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  return parse_header(in);
}

WavReader::WavReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
  if (!in_) throw Error(Errc::IoError, "cannot open " + path.string());
  info_ = parse_header(in_);
  remaining_ = info_.frames;
}

std::size_t WavReader::read(WaveFragment& frag) {
  if (frag.channels() != info_.channels) throw Error(Errc::ChannelMismatch, "fragment channel count differs");
  const std::size_t bytes_per_sample = info_.format == SampleFormat::pcm16 ? 2 : 4;
  const std::size_t n = std::min(remaining_, frag.frames());
  const std::size_t nbytes = n * info_.channels * bytes_per_sample;
  if (buf_.size() < frag.frames() * info_.channels * bytes_per_sample)
    buf_.resize(frag.frames() * info_.channels * bytes_per_sample);
  in_.read(buf_.data(), static_cast<std::streamsize>(nbytes));
  const std::size_t got = static_cast<std::size_t>(in_.gcount()) / (info_.channels * bytes_per_sample);
  const auto* p = reinterpret_cast<const unsigned char*>(buf_.data());
  for (std::size_t k = 0; k < got; ++k) {
    for (std::size_t c = 0; c < info_.channels; ++c) {
      const unsigned char* s = p + (k * info_.channels + c) * bytes_per_sample;
      if (info_.format == SampleFormat::pcm16) {
        frag(c, k) = static_cast<float>(static_cast<std::int16_t>(le16(s))) / 32768.0f;
      } else {
        const std::uint32_t bits = le32(s);
        float f;
        std::memcpy(&f, &bits, 4);
        frag(c, k) = f;
      }
    }
  }
  for (std::size_t c = 0; c < info_.channels; ++c)
    for (std::size_t k = got; k < frag.frames(); ++k) frag(c, k) = 0.0f;
  remaining_ = got < n ? 0 : remaining_ - got;
  return got;
}

WavWriter::WavWriter(const std::filesystem::path& path, std::size_t channels, std::uint32_t srate)
    : out_(path, std::ios::binary | std::ios::trunc), channels_(channels) {
  if (!out_) throw Error(Errc::IoError, "cannot create " + path.string());
  out_.write("RIFF", 4);
  put32(out_, 0);
  out_.write("WAVEfmt ", 8);
  put32(out_, 16);
  put16(out_, kFormatFloat);
  put16(out_, static_cast<std::uint16_t>(channels));
  put32(out_, srate);
  put32(out_, static_cast<std::uint32_t>(srate * channels * 4));
  put16(out_, static_cast<std::uint16_t>(channels * 4));
  put16(out_, 32);
  out_.write("data", 4);
  put32(out_, 0);
}

WavWriter::~WavWriter() {
  try {
    close();
  } catch (...) {
  }
}

void WavWriter::write(const WaveFragment& frag) {
  if (frag.channels() != channels_) throw Error(Errc::ChannelMismatch, "fragment channel count differs");
  buf_.resize(frag.frames() * channels_);
  for (std::size_t k = 0; k < frag.frames(); ++k)
    for (std::size_t c = 0; c < channels_; ++c) buf_[k * channels_ + c] = frag(c, k);
  static_assert(sizeof(float) == 4);
  out_.write(reinterpret_cast<const char*>(buf_.data()), static_cast<std::streamsize>(buf_.size() * 4));
  frames_ += frag.frames();
}

void WavWriter::close() {
  if (!out_.is_open()) return;
  const std::size_t data_bytes = frames_ * channels_ * 4;
  out_.seekp(4);
  put32(out_, static_cast<std::uint32_t>(36 + data_bytes));
  out_.seekp(40);
  put32(out_, static_cast<std::uint32_t>(data_bytes));
  out_.close();
  if (out_.fail()) throw Error(Errc::IoError, "error writing WAV file");
}

WavData read_wav(const std::filesystem::path& path) {
  WavReader r(path);
  WavData d{r.info(), WaveFragment(r.info().channels, r.info().frames)};
  if (d.info.frames > 0) r.read(d.audio);
  return d;
}

void write_wav(const std::filesystem::path& path, const WaveFragment& audio, std::uint32_t srate) {
  WavWriter w(path, audio.channels(), srate);
  w.write(audio);
  w.close();
}

}  // namespace mha
