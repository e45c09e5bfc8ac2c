#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mha/error.hpp"

namespace mha {

using ACValue = std::variant<std::int64_t, double, std::vector<std::int64_t>, std::vector<double>>;

/// Algorithm-communication blackboard shared by the plugins of one chain.
/// Entries are created during prepare; process() may only overwrite the
/// contents of existing entries in place (see slot()).
class ACSpace {
 public:
  void insert(const std::string& key, ACValue value) { entries_[key] = std::move(value); }
  void erase(const std::string& key) { entries_.erase(key); }
  bool contains(const std::string& key) const { return entries_.count(key) != 0; }
  std::size_t size() const noexcept { return entries_.size(); }

  template <class T>
  const T& get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw Error(Errc::MissingACKey, "no AC variable '" + key + "'");
    if (const auto* p = std::get_if<T>(&it->second)) return *p;
    throw Error(Errc::TypeMismatch, "AC variable '" + key + "' has a different type");
  }

  /// Mutable reference for process-time writes. The element count must not
  /// change after prepare.
  template <class T>
  T& slot(const std::string& key) {
    return const_cast<T&>(get<T>(key));
  }

  friend bool operator==(const ACSpace&, const ACSpace&) = default;

 private:
  std::map<std::string, ACValue> entries_;
};

}  // namespace mha
