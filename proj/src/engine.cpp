#include "mha/engine.hpp"

#include "mha/plugins/transducers.hpp"

namespace mha {

namespace {
const char* state_name(EngineState s) {
  switch (s) {
    case EngineState::unprepared: return "unprepared";
    case EngineState::prepared: return "prepared";
    case EngineState::running: return "running";
  }
  return "unprepared";
}

Variable& root_var(Namespace& root, const char* name, Value init, std::string help, Range range = {}) {
  return root.insert(name, Variable(Access::writable, std::move(init), std::move(help), std::move(range)));
}
Variable& root_monitor(Namespace& root, const char* name, Value init, std::string help, Range range = {}) {
  return root.insert(name, Variable(Access::monitor, std::move(init), std::move(help), std::move(range)));
}
}  // namespace

Engine::Engine(const PluginRegistry& registry)
    : registry_(registry),
      root_("openMHA-style processing framework"),
      interp_(root_),
      nchannels_in_(root_var(root_, "nchannels_in", std::int64_t{1}, "Number of input channels",
                             NumericRange::parse("[1,inf["))),
      fragsize_(root_var(root_, "fragsize", std::int64_t{64}, "Samples per channel per fragment",
                         NumericRange::parse("[1,inf["))),
      srate_(root_var(root_, "srate", std::int64_t{44100}, "Sampling rate in Hz", NumericRange::parse("[1,inf["))),
      mhalib_(root_var(root_, "mhalib", std::string{}, "Top-level processing plugin, mounted at mha")),
      iolib_(root_var(root_, "iolib", std::string{}, "IO library (file or test), mounted at io")),
      mha_ns_(root_.add_namespace("mha")),
      io_ns_(root_.add_namespace("io")),
      cmd_(root_var(root_, "cmd", Keyword{"nop"}, "Lifecycle command",
                    KeywordSet{{"nop", "prepare", "start", "stop", "release", "quit"}})),
      state_mon_(root_monitor(root_, "state", Keyword{"unprepared"}, "Processing state",
                              KeywordSet{{"unprepared", "prepared", "running"}})),
      nchannels_out_(root_monitor(root_, "nchannels_out", std::int64_t{0}, "Number of output channels")),
      latency_mon_(root_monitor(root_, "latency", std::int64_t{0}, "Algorithmic delay of the chain in samples")) {
  mhalib_.on_post_write([this](const Variable& v) { load_plugin(v.as_text()); });
  iolib_.on_post_write([this](const Variable& v) { load_io(v.as_text()); });
  cmd_.on_post_write([this](const Variable& v) { run_command(v.as_text()); });
  state_mon_.on_pre_read([this](Variable&) { poll(); });
}

Engine::~Engine() {
  if (io_) io_->stop();
  if (plugin_) plugin_->release();
  io_.reset();
  plugin_.reset();
}

void Engine::load_plugin(const std::string& name) {
  if (!name.empty() && !registry_.contains(name))
    throw Error(Errc::LoadError, "no plugin named '" + name + "'");
  plugin_.reset();
  mha_ns_.clear();
  mha_ns_.set_help({});
  ac_ = ACSpace{};
  if (name.empty()) return;
  try {
    plugin_ = registry_.create(name, mha_ns_, ac_);
  } catch (...) {
    mha_ns_.clear();
    throw;
  }
}

void Engine::load_io(const std::string& name) {
  if (!name.empty() && name != "file" && name != "test")
    throw Error(Errc::LoadError, "no IO library named '" + name + "'");
  io_.reset();
  io_ns_.clear();
  if (!name.empty()) io_ = make_io_backend(name, io_ns_);
}

void Engine::run_command(const std::string& cmd) {
  if (cmd == "nop") return;
  if (cmd == "prepare") return prepare();
  if (cmd == "start") return start();
  if (cmd == "stop") return stop();
  if (cmd == "release") return release();
  if (cmd == "quit") return quit();
}

void Engine::set_state(EngineState s) {
  state_ = s;
  state_mon_.set(Keyword{state_name(s)});
}

void Engine::lock_structure(bool locked) {
  for (Variable* v : {&nchannels_in_, &fragsize_, &srate_, &mhalib_, &iolib_}) v->set_locked(locked);
}

IOFormat Engine::io_format() const {
  IOFormat f;
  f.channels_in = in_info_.channels;
  f.channels_out = out_info_.channels;
  f.fragsize = in_info_.fragsize;
  f.srate = in_info_.srate;
  f.latency = latency();
  return f;
}

std::size_t Engine::latency() const noexcept {
  return plugin_ && plugin_->is_prepared() ? plugin_->latency() : 0;
}

void Engine::prepare() {
  if (state_ != EngineState::unprepared)
    throw Error(Errc::InvalidTransition, std::string("cannot prepare while ") + state_name(state_));
  if (!plugin_) throw Error(Errc::LoadError, "mhalib is not set");
  SignalInfo in;
  in.channels = static_cast<std::size_t>(nchannels_in_.as_int());
  in.domain = Domain::waveform;
  in.fragsize = static_cast<std::size_t>(fragsize_.as_int());
  in.srate = static_cast<double>(srate_.as_int());
  SignalInfo out;
  try {
    out = plugin_->prepare(in);
  } catch (...) {
    rethrow_with_context(plugin_->name());
  }
  if (out.domain != Domain::waveform || out.fragsize != in.fragsize) {
    plugin_->release();
    throw Error(Errc::DomainError, "mhalib output must be waveform with the input fragment size");
  }
  in_info_ = in;
  out_info_ = out;
  if (io_) {
    try {
      io_->prepare(io_format());
    } catch (...) {
      plugin_->release();
      throw;
    }
  }
  nchannels_out_.set(static_cast<std::int64_t>(out.channels));
  latency_mon_.set(static_cast<std::int64_t>(latency()));
  lock_structure(true);
  set_state(EngineState::prepared);
}

void Engine::start() {
  if (state_ == EngineState::running) throw Error(Errc::InvalidTransition, "already running");
  if (!io_) throw Error(Errc::LoadError, "iolib is not set");
  const bool auto_prepared = state_ == EngineState::unprepared;
  if (auto_prepared) prepare();
  try {
    io_->start([this](WaveFragment& in) -> WaveFragment& { return process(in); });
  } catch (...) {
    if (auto_prepared) release();
    throw;
  }
  set_state(EngineState::running);
}

void Engine::stop() {
  if (state_ != EngineState::running) throw Error(Errc::InvalidTransition, "not running");
  io_->stop();
  set_state(EngineState::prepared);
}

void Engine::release() {
  if (state_ == EngineState::running) throw Error(Errc::InvalidTransition, "cannot release while running");
  if (state_ == EngineState::unprepared) throw Error(Errc::InvalidTransition, "not prepared");
  if (io_) io_->release();
  plugin_->release();
  lock_structure(false);
  nchannels_out_.set(std::int64_t{0});
  latency_mon_.set(std::int64_t{0});
  set_state(EngineState::unprepared);
}

void Engine::quit() {
  if (state_ == EngineState::running) {
    io_->wait_finished();
    stop();
  }
  if (state_ == EngineState::prepared) release();
  quit_ = true;
}

void Engine::poll() {
  if (state_ == EngineState::running && io_->finished()) stop();
}

void Engine::wait_io() {
  if (state_ != EngineState::running) return;
  io_->wait_finished();
  poll();
}

WaveFragment& Engine::process(WaveFragment& in) { return plugin_->process(in); }

FileRunStats file_run(Engine& engine, const std::filesystem::path& in, const std::filesystem::path& out) {
  if (!dynamic_cast<FileIO*>(engine.io())) throw Error(Errc::LoadError, "iolib must be file");
  assign(engine.root(), NodePath::parse("io.in"), in.string());
  assign(engine.root(), NodePath::parse("io.out"), out.string());
  assign(engine.root(), NodePath::parse("cmd"), "start");
  engine.wait_io();
  FileRunStats stats;
  stats.fragments = engine.io()->fragments();
  const std::string err = query(engine.root(), NodePath::parse("io.error"));
  if (!err.empty()) throw Error(Errc::IoError, err);
  if (dynamic_cast<plugins::Transducers*>(engine.plugin()))
    stats.clipped = static_cast<std::uint64_t>(
        std::stoll(query(engine.root(), NodePath::parse("mha.calib_out.clipped"))));
  return stats;
}

}  // namespace mha
