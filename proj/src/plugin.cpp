#include "mha/plugin.hpp"

namespace mha {

Plugin::Plugin(const PluginContext& ctx, std::string documentation)
    : ac_(ctx.ac), ns_(ctx.ns), name_(ctx.name), registry_(ctx.registry), doc_(std::move(documentation)) {
  ns_.set_help(doc_);
}

Plugin::~Plugin() = default;

SignalInfo Plugin::prepare(const SignalInfo& in) {
  if (prepared_) throw Error(Errc::PreparedStateError, name_ + " is already prepared");
  in.validate();
  SignalInfo out = on_prepare(in);
  try {
    out.validate();
  } catch (...) {
    on_release();
    throw;
  }
  in_ = in;
  out_ = out;
  for (auto* v : structural_) v->set_locked(true);
  prepared_ = true;
  return out;
}

void Plugin::release() {
  if (!prepared_) return;
  on_release();
  for (auto* v : structural_) v->set_locked(false);
  prepared_ = false;
}

WaveFragment& Plugin::process(WaveFragment&) {
  throw Error(Errc::DomainError, name_ + " does not process waveform signals");
}

SpecFragment& Plugin::process(SpecFragment&) {
  throw Error(Errc::DomainError, name_ + " does not process spectrum signals");
}

Variable& Plugin::parameter(std::string_view path, Value initial, std::string help, Range range,
                            Role role) {
  Variable& v = insert(ns_, NodePath::parse(path),
                       Variable(Access::writable, std::move(initial), std::move(help), std::move(range)));
  if (role == Role::structural) {
    structural_.push_back(&v);
  } else {
    v.on_post_write([this](const Variable&) {
      if (prepared_) on_update();
    });
  }
  return v;
}

Variable& Plugin::monitor(std::string_view path, Value initial, std::string help) {
  return insert(ns_, NodePath::parse(path), Variable(Access::monitor, std::move(initial), std::move(help)));
}

// ---- registry ---------------------------------------------------------------

void PluginRegistry::add(std::string name, PluginFactory factory) {
  if (!is_identifier(name)) throw Error(Errc::SyntaxError, "invalid plugin name '" + name + "'");
  if (factories_.count(name)) throw Error(Errc::DuplicateName, "plugin " + name + " already registered");
  factories_.emplace(std::move(name), std::move(factory));
}

bool PluginRegistry::contains(std::string_view name) const { return factories_.find(name) != factories_.end(); }

std::vector<std::string> PluginRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [n, f] : factories_) out.push_back(n);
  return out;
}

std::unique_ptr<Plugin> PluginRegistry::create(std::string_view name, Namespace& mount, ACSpace& ac) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw Error(Errc::LoadError, "no plugin named '" + std::string(name) + "'");
  try {
    return it->second(PluginContext{ac, mount, std::string(name), *this});
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Errc::LoadError, std::string(name) + ": " + e.what());
  }
}

std::unique_ptr<Plugin> PluginRegistry::load(std::string_view name, Namespace& parent, ACSpace& ac) const {
  if (!contains(name)) throw Error(Errc::LoadError, "no plugin named '" + std::string(name) + "'");
  Namespace& mount = parent.add_namespace(std::string(name));
  try {
    return create(name, mount, ac);
  } catch (...) {
    parent.remove(name);
    throw;
  }
}

// ---- slot -------------------------------------------------------------------

void PluginSlot::load(std::string_view name) {
  if (!name.empty() && !registry_.contains(name))
    throw Error(Errc::LoadError, "no plugin named '" + std::string(name) + "'");
  unload();
  if (name.empty()) return;
  plugin_ = registry_.load(name, parent_, ac_);
  name_ = std::string(name);
}

void PluginSlot::unload() {
  if (!plugin_) return;
  plugin_->release();
  plugin_.reset();
  if (parent_.find(name_)) parent_.remove(name_);
  name_.clear();
}

void rethrow_with_context(const std::string& plugin_name) {
  try {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), plugin_name + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(Errc::InternalError, plugin_name + ": " + e.what());
  }
}

}  // namespace mha
