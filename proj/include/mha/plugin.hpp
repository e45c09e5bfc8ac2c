#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mha/ac_space.hpp"
#include "mha/handover.hpp"
#include "mha/param_tree.hpp"
#include "mha/signal.hpp"

namespace mha {

class PluginRegistry;

/// Everything a plugin receives at construction.
struct PluginContext {
  ACSpace& ac;
  Namespace& ns;  // the plugin's own namespace; its variables live here
  std::string name;
  const PluginRegistry& registry;
};

/// Base class of all processing plugins.
///
/// Lifecycle: construct -> prepare -> process* -> release, repeatable.
/// prepare() and release() run on the control thread; process() runs on the
/// audio thread and must not allocate, block, or touch the parameter tree.
/// Runtime parameters reach process() as snapshots through a HandoverCell.
class Plugin {
 public:
  Plugin(const PluginContext& ctx, std::string documentation);
  virtual ~Plugin();
  Plugin(const Plugin&) = delete;
  Plugin& operator=(const Plugin&) = delete;

  /// Throws PreparedStateError if already prepared. On success the plugin's
  /// structural parameters are locked until release().
  SignalInfo prepare(const SignalInfo& in);
  void release();
  bool is_prepared() const noexcept { return prepared_; }

  virtual WaveFragment& process(WaveFragment& signal);
  virtual SpecFragment& process(SpecFragment& signal);

  /// Algorithmic delay in samples introduced by this plugin (valid after prepare).
  virtual std::size_t latency() const noexcept { return 0; }

  const std::string& name() const noexcept { return name_; }
  const std::string& documentation() const noexcept { return doc_; }
  const SignalInfo& input_info() const noexcept { return in_; }
  const SignalInfo& output_info() const noexcept { return out_; }

 protected:
  virtual SignalInfo on_prepare(const SignalInfo& in) = 0;
  virtual void on_release() {}
  /// Runs on the control thread when a runtime parameter changed while
  /// prepared. Throwing rejects the assignment.
  virtual void on_update() {}

  enum class Role {
    runtime,     // may change while prepared; triggers on_update()
    structural,  // locked while prepared
  };

  /// Inserts a writable variable at `path` (relative to the plugin namespace).
  Variable& parameter(std::string_view path, Value initial, std::string help, Range range = {},
                      Role role = Role::runtime);
  Variable& monitor(std::string_view path, Value initial, std::string help);

  Namespace& ns() noexcept { return ns_; }
  ACSpace& ac() noexcept { return ac_; }
  const PluginRegistry& registry() const noexcept { return registry_; }

 private:
  ACSpace& ac_;
  Namespace& ns_;
  std::string name_;
  const PluginRegistry& registry_;
  std::string doc_;
  bool prepared_ = false;
  SignalInfo in_;
  SignalInfo out_;
  std::vector<Variable*> structural_;
};

using PluginFactory = std::function<std::unique_ptr<Plugin>(const PluginContext&)>;

/// Static name -> factory map replacing shared-library plugin discovery.
class PluginRegistry {
 public:
  /// Throws DuplicateName.
  void add(std::string name, PluginFactory factory);
  bool contains(std::string_view name) const;
  std::vector<std::string> names() const;

  /// Constructs plugin `name` with its variables directly in `mount`.
  std::unique_ptr<Plugin> create(std::string_view name, Namespace& mount, ACSpace& ac) const;
  /// Creates the namespace `parent.<name>` and constructs the plugin there.
  /// On failure the namespace is removed again.
  std::unique_ptr<Plugin> load(std::string_view name, Namespace& parent, ACSpace& ac) const;

 private:
  std::map<std::string, PluginFactory, std::less<>> factories_;
};

/// Registry preloaded with the built-in plugins.
PluginRegistry& default_registry();
void register_builtin_plugins(PluginRegistry& registry);

template <class P>
void register_plugin(PluginRegistry& registry, std::string name) {
  registry.add(std::move(name), [](const PluginContext& ctx) { return std::make_unique<P>(ctx); });
}

/// Holds at most one child plugin mounted below `parent` (the loader behind
/// variables such as `plugin_name`).
class PluginSlot {
 public:
  PluginSlot(Namespace& parent, ACSpace& ac, const PluginRegistry& registry)
      : parent_(parent), ac_(ac), registry_(registry) {}
  ~PluginSlot() { unload(); }
  PluginSlot(const PluginSlot&) = delete;
  PluginSlot& operator=(const PluginSlot&) = delete;

  /// Replaces the current plugin; the old subtree is removed first. An empty
  /// name unloads. Throws LoadError for unregistered names, leaving the
  /// current plugin in place.
  void load(std::string_view name);
  void unload();

  Plugin* get() const noexcept { return plugin_.get(); }
  Plugin* operator->() const noexcept { return plugin_.get(); }
  explicit operator bool() const noexcept { return plugin_ != nullptr; }

 private:
  Namespace& parent_;
  ACSpace& ac_;
  const PluginRegistry& registry_;
  std::unique_ptr<Plugin> plugin_;
  std::string name_;
};

/// Prefixes an error message with the name of the plugin that raised it.
[[noreturn]] void rethrow_with_context(const std::string& plugin_name);

}  // namespace mha
