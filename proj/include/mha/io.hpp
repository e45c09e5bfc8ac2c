#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mha/param_tree.hpp"
#include "mha/signal.hpp"
#include "mha/wav.hpp"

namespace mha {

struct IOFormat {
  std::size_t channels_in = 1;
  std::size_t channels_out = 1;
  std::size_t fragsize = 64;
  double srate = 44100.0;
  std::size_t latency = 0;  // samples of algorithmic delay in the processing chain
};

/// Audio-thread entry point. Returns the output fragment for the given
/// input fragment (which it may modify in place).
using ProcessFn = std::function<WaveFragment&(WaveFragment&)>;

/// IO plugin contract. Backends expose their variables below `io`.
class IOBackend {
 public:
  virtual ~IOBackend() = default;
  virtual void prepare(const IOFormat& format) = 0;
  virtual void start(ProcessFn process) = 0;
  virtual void stop() = 0;
  virtual void release() = 0;

  /// True once a finite source has been processed completely.
  virtual bool finished() const noexcept { return false; }
  /// Blocks until finished() or stop(); returns immediately for endless sources.
  virtual void wait_finished() {}
  /// Fragments handed to the processing callback since start.
  virtual std::uint64_t fragments() const noexcept = 0;
};

/// Sound-file IO: reads io.in, writes float32 io.out on a dedicated thread.
/// After EOF, ceil(latency / fragsize) zero fragments drain the chain.
class FileIO : public IOBackend {
 public:
  explicit FileIO(Namespace& io);
  ~FileIO() override;

  void prepare(const IOFormat& format) override;
  void start(ProcessFn process) override;
  void stop() override;
  void release() override {}
  bool finished() const noexcept override { return finished_.load(); }
  void wait_finished() override;
  std::uint64_t fragments() const noexcept override { return fragments_.load(); }

 private:
  void validate() const;
  void run(std::unique_ptr<WavReader> reader, std::unique_ptr<WavWriter> writer);

  Variable& in_path_;
  Variable& out_path_;
  Variable& error_;
  IOFormat fmt_;
  ProcessFn process_;
  std::thread thread_;
  std::atomic<bool> stop_requested_{false};
  std::atomic<bool> finished_{false};
  std::atomic<std::uint64_t> fragments_{0};
  std::mutex mutex_;
  std::condition_variable done_cv_;
  std::string run_error_;
};

/// In-memory IO driven by the caller: push() processes one fragment
/// synchronously while started, pull() collects the outputs.
class TestIO : public IOBackend {
 public:
  explicit TestIO(Namespace& io);

  void prepare(const IOFormat& format) override;
  void start(ProcessFn process) override;
  void stop() override;
  void release() override;
  std::uint64_t fragments() const noexcept override { return fragments_.load(); }

  const IOFormat& format() const noexcept { return fmt_; }
  bool running() const noexcept { return running_.load(); }

  /// Processes one fragment (channels_in x fragsize). Throws
  /// InvalidTransition when not started.
  void push(const WaveFragment& in);
  /// Processes without keeping a copy of the output; returns it instead.
  /// Allocation-free after the first call.
  const WaveFragment& push_discard(const WaveFragment& in);
  std::vector<WaveFragment> pull();

 private:
  const WaveFragment& process_locked(const WaveFragment& in);

  IOFormat fmt_;
  ProcessFn process_;
  std::atomic<bool> running_{false};
  std::atomic<std::uint64_t> fragments_{0};
  std::mutex mutex_;
  WaveFragment in_;
  WaveFragment last_;
  std::vector<WaveFragment> pending_;
};

/// Constructs the backend registered as `name` ("file" or "test") with its
/// variables below `io`. Throws LoadError for other names.
std::unique_ptr<IOBackend> make_io_backend(const std::string& name, Namespace& io);

}  // namespace mha
