#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mha/error.hpp"

namespace mha {

bool is_identifier(std::string_view s) noexcept;

/// Dot-separated address of a node, e.g. `mha.overlapadd.wnd.len`.
/// The empty path denotes the root namespace.
class NodePath {
 public:
  NodePath() = default;
  explicit NodePath(std::vector<std::string> segments);

  /// Parses the dotted text form. Throws Error(SyntaxError) on a bad segment.
  static NodePath parse(std::string_view text);

  const std::vector<std::string>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }
  std::size_t size() const noexcept { return segments_.size(); }
  std::string str() const;

  NodePath parent() const;
  const std::string& leaf() const { return segments_.back(); }
  NodePath child(std::string segment) const;

  friend bool operator==(const NodePath&, const NodePath&) = default;

 private:
  std::vector<std::string> segments_;
};

struct Keyword {
  std::string value;
  friend bool operator==(const Keyword&, const Keyword&) = default;
};

/// The closed set of configuration value kinds. Alternative order is the
/// ValueType numbering.
using Value = std::variant<std::int64_t, double, bool, Keyword, std::string,
                           std::vector<double>, std::vector<std::int64_t>,
                           std::vector<std::string>>;

enum class ValueType { Int, Real, Bool, Keyword, Text, VecReal, VecInt, VecText };

inline ValueType type_of(const Value& v) noexcept {
  return static_cast<ValueType>(v.index());
}

std::string_view type_name(ValueType t) noexcept;

/// Numeric interval in the openMHA bracket notation: `[0,1]`, `]0,inf[`.
/// Open ends use the outward-facing bracket.
struct NumericRange {
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  bool min_open = false;
  bool max_open = false;

  static NumericRange parse(std::string_view text);
  bool contains(double x) const noexcept;
  std::string str() const;
};

struct KeywordSet {
  std::vector<std::string> words;
  bool contains(std::string_view w) const noexcept;
  std::string str() const;
};

using Range = std::variant<std::monostate, NumericRange, KeywordSet>;

enum class Access { writable, monitor };

class Variable {
 public:
  using ReadHook = std::function<void(Variable&)>;
  using PreWriteHook = std::function<void(const Variable& current, const Value& incoming)>;
  using PostWriteHook = std::function<void(const Variable&)>;

  Variable(Access access, Value initial, std::string help, Range range = {});

  Access access() const noexcept { return access_; }
  ValueType type() const noexcept { return type_of(value_); }
  const Value& value() const noexcept { return value_; }
  const Range& range() const noexcept { return range_; }
  const std::string& help() const noexcept { return help_; }

  /// Full write protocol: access and lock checks, type check, pre-write hook,
  /// range validation, store, post-write hooks. A throwing post-write hook
  /// restores the previous value before the exception propagates.
  void assign(Value v);
  /// Parses `raw` as this variable's type and assigns it.
  void assign_text(std::string_view raw);

  /// Owner-side store for monitors; skips access checks and hooks.
  void set(Value v);

  /// Runs the pre-read hook, if any.
  void refresh();

  void on_pre_read(ReadHook hook) { pre_read_ = std::move(hook); }
  void on_pre_write(PreWriteHook hook) { pre_write_ = std::move(hook); }
  void on_post_write(PostWriteHook hook) { post_write_.push_back(std::move(hook)); }

  /// Locked variables reject writes with PreparedStateError.
  void set_locked(bool locked) noexcept { locked_ = locked; }
  bool locked() const noexcept { return locked_; }

  std::int64_t as_int() const;
  double as_real() const;
  bool as_bool() const;
  /// Text or Keyword content.
  const std::string& as_text() const;
  const std::vector<double>& as_vec_real() const;
  const std::vector<std::int64_t>& as_vec_int() const;
  const std::vector<std::string>& as_vec_text() const;

 private:
  void validate(const Value& v) const;

  Access access_;
  Value value_;
  std::string help_;
  Range range_;
  bool locked_ = false;
  ReadHook pre_read_;
  PreWriteHook pre_write_;
  std::vector<PostWriteHook> post_write_;
};

class ParamNode;

/// Ordered namespace of uniquely named children. Children keep stable
/// addresses for their whole lifetime.
class Namespace {
 public:
  explicit Namespace(std::string help = {});
  Namespace(Namespace&&) noexcept;
  Namespace& operator=(Namespace&&) noexcept;
  ~Namespace();

  Variable& insert(std::string name, Variable var);
  Namespace& add_namespace(std::string name, std::string help = {});
  /// Returns the existing child namespace or creates it.
  /// Throws PathThroughLeaf if `name` is a variable.
  Namespace& ensure_namespace(const std::string& name);

  ParamNode* find(std::string_view name) noexcept;
  const ParamNode* find(std::string_view name) const noexcept;
  void remove(std::string_view name);
  void clear() noexcept;

  std::size_t size() const noexcept { return children_.size(); }
  const std::vector<std::pair<std::string, std::unique_ptr<ParamNode>>>& children() const noexcept {
    return children_;
  }

  const std::string& help() const noexcept { return help_; }
  void set_help(std::string help) { help_ = std::move(help); }

 private:
  std::string help_;
  std::vector<std::pair<std::string, std::unique_ptr<ParamNode>>> children_;
};

class ParamNode {
 public:
  explicit ParamNode(Variable v) : content_(std::move(v)) {}
  explicit ParamNode(Namespace ns) : content_(std::move(ns)) {}

  bool is_namespace() const noexcept { return std::holds_alternative<Namespace>(content_); }
  Variable& variable() { return std::get<Variable>(content_); }
  const Variable& variable() const { return std::get<Variable>(content_); }
  Namespace& ns() { return std::get<Namespace>(content_); }
  const Namespace& ns() const { return std::get<Namespace>(content_); }

 private:
  std::variant<Variable, Namespace> content_;
};

struct ListEntry {
  std::string name;
  std::string kind;  // "writable", "monitor" or "namespace"
  std::string type;  // type name; "namespace" for namespaces
};

// Path-addressed operations on a tree rooted at `root`.

/// Creates missing parent namespaces.
Variable& insert(Namespace& root, const NodePath& path, Variable var);
void assign(Namespace& root, const NodePath& path, std::string_view raw_text);
/// Canonical text of the variable at `path`, after its pre-read hook ran.
std::string query(Namespace& root, const NodePath& path);
std::vector<ListEntry> list(const Namespace& root, const NodePath& path);
/// Removing the empty path clears the root but keeps it.
void remove_subtree(Namespace& root, const NodePath& path);

ParamNode& resolve(Namespace& root, const NodePath& path);
const ParamNode& resolve(const Namespace& root, const NodePath& path);
Variable& resolve_variable(Namespace& root, const NodePath& path);
Namespace& resolve_namespace(Namespace& root, const NodePath& path);

}  // namespace mha
