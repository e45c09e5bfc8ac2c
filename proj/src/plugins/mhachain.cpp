#include "mha/plugins/mhachain.hpp"

#include <set>

namespace mha::plugins {

MhaChain::MhaChain(const PluginContext& ctx)
    : Plugin(ctx, "Plugin chain: runs the plugins named in algos in sequence") {
  auto& algos = parameter("algos", std::vector<std::string>{}, "Plugins to load, in processing order", {},
                          Role::structural);
  algos.on_pre_write([this](const Variable&, const Value& v) {
    std::set<std::string> seen;
    for (const auto& name : std::get<std::vector<std::string>>(v)) {
      if (!is_identifier(name)) throw Error(Errc::LoadError, "invalid plugin name '" + name + "'");
      if (!registry().contains(name)) throw Error(Errc::LoadError, "no plugin named '" + name + "'");
      if (!seen.insert(name).second)
        throw Error(Errc::DuplicateName, "plugin " + name + " listed twice");
      if (ns().find(name)) throw Error(Errc::DuplicateName, name + " collides with a chain variable");
    }
  });
  algos.on_post_write([this](const Variable& v) { load_algos(v.as_vec_text()); });
}

MhaChain::~MhaChain() { unload_all(); }

void MhaChain::unload_all() {
  for (std::size_t i = children_.size(); i-- > 0;) {
    children_[i]->release();
    children_[i].reset();
    if (ns().find(child_names_[i])) ns().remove(child_names_[i]);
  }
  children_.clear();
  child_names_.clear();
}

void MhaChain::load_algos(const std::vector<std::string>& names) {
  unload_all();
  try {
    for (const auto& name : names) {
      children_.push_back(registry().load(name, ns(), chain_ac_));
      child_names_.push_back(name);
    }
  } catch (...) {
    unload_all();
    throw;
  }
}

SignalInfo MhaChain::on_prepare(const SignalInfo& in) {
  const ACSpace saved = chain_ac_;
  SignalInfo cur = in;
  std::size_t i = 0;
  try {
    for (; i < children_.size(); ++i) {
      SignalInfo next;
      try {
        next = children_[i]->prepare(cur);
      } catch (...) {
        rethrow_with_context(child_names_[i]);
      }
      if (next.domain != cur.domain) {
        children_[i]->release();
        throw Error(Errc::DomainError, child_names_[i] + ": changes the signal domain inside a chain");
      }
      cur = next;
    }
  } catch (...) {
    while (i-- > 0) children_[i]->release();
    chain_ac_ = saved;
    throw;
  }
  return cur;
}

void MhaChain::on_release() {
  for (std::size_t i = children_.size(); i-- > 0;) children_[i]->release();
}

std::size_t MhaChain::latency() const noexcept {
  std::size_t total = 0;
  for (const auto& c : children_) total += c->latency();
  return total;
}

}  // namespace mha::plugins
