#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string_view>

#include "mha/ac_space.hpp"
#include "mha/config_lang.hpp"
#include "mha/io.hpp"
#include "mha/param_tree.hpp"
#include "mha/plugin.hpp"

namespace mha {

enum class EngineState { unprepared, prepared, running };

/// The framework object: owns the configuration tree, the top-level plugin
/// (`mhalib`, mounted at `mha`), the IO backend (`iolib`, mounted at `io`),
/// and the `cmd`/`state` lifecycle.
///
/// All methods except process() belong to the control thread.
class Engine {
 public:
  explicit Engine(const PluginRegistry& registry = default_registry());
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Namespace& root() noexcept { return root_; }
  Response execute(std::string_view line) { return interp_.execute_line(line); }
  Response read_file(const std::filesystem::path& file) { return interp_.read_file(file); }

  EngineState state() const noexcept { return state_; }
  void prepare();
  void start();
  void stop();
  void release();
  /// Stops IO (letting a file run drain first), releases, and flags quit.
  void quit();
  bool quit_requested() const noexcept { return quit_.load(); }

  /// Returns to `prepared` once a finite IO source is exhausted.
  void poll();
  /// Blocks until a running finite IO source is exhausted, then polls.
  void wait_io();

  Plugin* plugin() const noexcept { return plugin_.get(); }
  IOBackend* io() const noexcept { return io_.get(); }
  TestIO* test_io() const noexcept { return dynamic_cast<TestIO*>(io_.get()); }
  std::size_t latency() const noexcept;
  const SignalInfo& output_info() const noexcept { return out_info_; }

  /// Audio thread: runs the top-level plugin on one fragment.
  WaveFragment& process(WaveFragment& in);

 private:
  void load_plugin(const std::string& name);
  void load_io(const std::string& name);
  void run_command(const std::string& cmd);
  void set_state(EngineState s);
  void lock_structure(bool locked);
  IOFormat io_format() const;

  const PluginRegistry& registry_;
  Namespace root_;
  Interpreter interp_;
  ACSpace ac_;

  Variable& nchannels_in_;
  Variable& fragsize_;
  Variable& srate_;
  Variable& mhalib_;
  Variable& iolib_;
  Namespace& mha_ns_;
  Namespace& io_ns_;
  Variable& cmd_;
  Variable& state_mon_;
  Variable& nchannels_out_;
  Variable& latency_mon_;

  std::unique_ptr<Plugin> plugin_;
  std::unique_ptr<IOBackend> io_;
  EngineState state_ = EngineState::unprepared;
  SignalInfo in_info_;
  SignalInfo out_info_;
  std::atomic<bool> quit_{false};
};

struct FileRunStats {
  std::uint64_t fragments = 0;
  std::uint64_t clipped = 0;
};

/// Processes `in` into `out` with the engine's file IO (iolib must be
/// `file`) and waits for completion; the engine ends in state prepared.
FileRunStats file_run(Engine& engine, const std::filesystem::path& in, const std::filesystem::path& out);

}  // namespace mha
