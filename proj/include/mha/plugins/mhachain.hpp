#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mha/plugin.hpp"

namespace mha::plugins {

/// Runs the plugins listed in `algos` in order, each mounted under the
/// chain's namespace, sharing one AC space owned by the chain.
class MhaChain : public Plugin {
 public:
  explicit MhaChain(const PluginContext& ctx);
  ~MhaChain() override;

  WaveFragment& process(WaveFragment& s) override { return run(s); }
  SpecFragment& process(SpecFragment& s) override { return run(s); }
  std::size_t latency() const noexcept override;

  const ACSpace& chain_ac() const noexcept { return chain_ac_; }
  std::size_t size() const noexcept { return children_.size(); }
  Plugin& child(std::size_t i) { return *children_[i]; }

 protected:
  SignalInfo on_prepare(const SignalInfo& in) override;
  void on_release() override;

 private:
  template <class F>
  F& run(F& s) {
    F* cur = &s;
    for (auto& c : children_) cur = &c->process(*cur);
    return *cur;
  }

  void load_algos(const std::vector<std::string>& names);
  void unload_all();

  ACSpace chain_ac_;
  std::vector<std::unique_ptr<Plugin>> children_;
  std::vector<std::string> child_names_;
};

}  // namespace mha::plugins
