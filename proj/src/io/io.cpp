#include "mha/io.hpp"

#include <filesystem>

#include "mha/config_lang.hpp"
#include "mha/error.hpp"

namespace mha {

FileIO::FileIO(Namespace& io)
    : in_path_(io.insert("in", Variable(Access::writable, std::string{}, "Input sound file (WAV)"))),
      out_path_(io.insert("out", Variable(Access::writable, std::string{}, "Output sound file (float32 WAV)"))),
      error_(io.insert("error", Variable(Access::monitor, std::string{}, "Error of the last file run, if any"))) {
  error_.on_pre_read([this](Variable& v) {
    if (!finished_.load()) return;
    std::lock_guard lock(mutex_);
    v.set(run_error_);
  });
}

FileIO::~FileIO() { stop(); }

void FileIO::validate() const {
  if (in_path_.as_text().empty()) throw Error(Errc::IoError, "io.in is not set");
  if (out_path_.as_text().empty()) throw Error(Errc::IoError, "io.out is not set");
  WavReader r(in_path_.as_text());
  if (r.info().channels != fmt_.channels_in)
    throw Error(Errc::ChannelMismatch, in_path_.as_text() + " has " + std::to_string(r.info().channels) +
                                           " channels, expected " + std::to_string(fmt_.channels_in));
  if (static_cast<double>(r.info().srate) != fmt_.srate)
    throw Error(Errc::SampleRateMismatch, in_path_.as_text() + " has sample rate " +
                                              std::to_string(r.info().srate) + ", expected " +
                                              format_real(fmt_.srate));
}

void FileIO::prepare(const IOFormat& format) {
  fmt_ = format;
  validate();
}

void FileIO::start(ProcessFn process) {
  stop();
  validate();
  auto reader = std::make_unique<WavReader>(in_path_.as_text());
  auto writer = std::make_unique<WavWriter>(out_path_.as_text(), fmt_.channels_out,
                                            static_cast<std::uint32_t>(fmt_.srate));
  process_ = std::move(process);
  stop_requested_ = false;
  finished_ = false;
  fragments_ = 0;
  {
    std::lock_guard lock(mutex_);
    run_error_.clear();
  }
  thread_ = std::thread([this, r = std::move(reader), w = std::move(writer)]() mutable {
    run(std::move(r), std::move(w));
  });
}

void FileIO::run(std::unique_ptr<WavReader> reader, std::unique_ptr<WavWriter> writer) {
  std::string err;
  try {
    WaveFragment in(fmt_.channels_in, fmt_.fragsize);
    const std::size_t flush = (fmt_.latency + fmt_.fragsize - 1) / fmt_.fragsize;
    std::size_t drained = 0;
    while (!stop_requested_.load(std::memory_order_relaxed)) {
      const std::size_t got = reader->read(in);
      if (got == 0) {
        if (drained == flush) break;
        ++drained;
      }
      WaveFragment& out = process_(in);
      writer->write(out);
      fragments_.fetch_add(1, std::memory_order_relaxed);
    }
    writer->close();
  } catch (const std::exception& e) {
    err = e.what();
  }
  {
    std::lock_guard lock(mutex_);
    run_error_ = err;
    finished_ = true;
  }
  done_cv_.notify_all();
}

void FileIO::wait_finished() {
  std::unique_lock lock(mutex_);
  done_cv_.wait(lock, [this] { return finished_.load() || !thread_.joinable(); });
}

void FileIO::stop() {
  stop_requested_ = true;
  if (thread_.joinable()) thread_.join();
}

TestIO::TestIO(Namespace&) {}

void TestIO::prepare(const IOFormat& format) {
  fmt_ = format;
  in_ = WaveFragment(fmt_.channels_in, fmt_.fragsize);
  last_ = WaveFragment(fmt_.channels_out, fmt_.fragsize);
  pending_.clear();
}

void TestIO::start(ProcessFn process) {
  std::lock_guard lock(mutex_);
  process_ = std::move(process);
  fragments_ = 0;
  running_ = true;
}

void TestIO::stop() {
  std::lock_guard lock(mutex_);
  running_ = false;
}

void TestIO::release() {
  std::lock_guard lock(mutex_);
  pending_.clear();
}

const WaveFragment& TestIO::push_discard(const WaveFragment& in) {
  std::lock_guard lock(mutex_);
  return process_locked(in);
}

const WaveFragment& TestIO::process_locked(const WaveFragment& in) {
  if (!running_) throw Error(Errc::InvalidTransition, "test IO is not started");
  if (in.channels() != fmt_.channels_in || in.frames() != fmt_.fragsize)
    throw Error(Errc::ChannelMismatch, "pushed fragment does not match the prepared format");
  std::copy(in.data().begin(), in.data().end(), in_.data().begin());
  const WaveFragment& out = process_(in_);
  std::copy(out.data().begin(), out.data().end(), last_.data().begin());
  fragments_.fetch_add(1, std::memory_order_relaxed);
  return last_;
}

void TestIO::push(const WaveFragment& in) {
  std::lock_guard lock(mutex_);
  pending_.push_back(process_locked(in));
}

std::vector<WaveFragment> TestIO::pull() {
  std::lock_guard lock(mutex_);
  return std::exchange(pending_, {});
}

std::unique_ptr<IOBackend> make_io_backend(const std::string& name, Namespace& io) {
  if (name == "file") return std::make_unique<FileIO>(io);
  if (name == "test") return std::make_unique<TestIO>(io);
  throw Error(Errc::LoadError, "no IO library named '" + name + "'");
}

}  // namespace mha
