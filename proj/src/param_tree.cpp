#include "mha/param_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "mha/config_lang.hpp"

namespace mha {

bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

NodePath::NodePath(std::vector<std::string> segments) : segments_(std::move(segments)) {
  for (const auto& s : segments_)
    if (!is_identifier(s)) throw Error(Errc::SyntaxError, "invalid path segment '" + s + "'");
}

NodePath NodePath::parse(std::string_view text) {
  std::vector<std::string> segs;
  if (text.empty()) return NodePath{};
  std::size_t start = 0;
  while (true) {
    auto dot = text.find('.', start);
    auto seg = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (!is_identifier(seg))
      throw Error(Errc::SyntaxError, "invalid path '" + std::string(text) + "'");
    segs.emplace_back(seg);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  NodePath p;
  p.segments_ = std::move(segs);
  return p;
}

std::string NodePath::str() const {
  std::string out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i) out += '.';
    out += segments_[i];
  }
  return out;
}

NodePath NodePath::parent() const {
  NodePath p = *this;
  if (!p.segments_.empty()) p.segments_.pop_back();
  return p;
}

NodePath NodePath::child(std::string segment) const {
  if (!is_identifier(segment))
    throw Error(Errc::SyntaxError, "invalid path segment '" + segment + "'");
  NodePath p = *this;
  p.segments_.push_back(std::move(segment));
  return p;
}

std::string_view type_name(ValueType t) noexcept {
  switch (t) {
    case ValueType::Int: return "int";
    case ValueType::Real: return "real";
    case ValueType::Bool: return "bool";
    case ValueType::Keyword: return "keyword";
    case ValueType::Text: return "text";
    case ValueType::VecReal: return "vector<real>";
    case ValueType::VecInt: return "vector<int>";
    case ValueType::VecText: return "vector<text>";
  }
  return "?";
}

// ---- ranges ----------------------------------------------------------------

NumericRange NumericRange::parse(std::string_view text) {
  auto bad = [&] { return Error(Errc::SyntaxError, "invalid range '" + std::string(text) + "'"); };
  if (text.size() < 5) throw bad();
  NumericRange r;
  char lo = text.front(), hi = text.back();
  if ((lo != '[' && lo != ']') || (hi != '[' && hi != ']')) throw bad();
  r.min_open = lo == ']';
  r.max_open = hi == '[';
  auto body = text.substr(1, text.size() - 2);
  auto comma = body.find(',');
  if (comma == std::string_view::npos) throw bad();
  auto number = [&](std::string_view s, double inf) {
    if (s == "inf") return inf;
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw bad();
    return v;
  };
  r.min = number(body.substr(0, comma), std::numeric_limits<double>::infinity());
  r.max = number(body.substr(comma + 1), std::numeric_limits<double>::infinity());
  return r;
}

bool NumericRange::contains(double x) const noexcept {
  if (std::isnan(x)) return false;
  if (min_open ? !(x > min) : !(x >= min)) return false;
  if (max_open ? !(x < max) : !(x <= max)) return false;
  return true;
}

std::string NumericRange::str() const {
  auto num = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    return format_real(v);
  };
  return std::string(min_open ? "]" : "[") + num(min) + "," + num(max) + (max_open ? "[" : "]");
}

bool KeywordSet::contains(std::string_view w) const noexcept {
  return std::find(words.begin(), words.end(), w) != words.end();
}

std::string KeywordSet::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out + "]";
}

// ---- variable --------------------------------------------------------------

Variable::Variable(Access access, Value initial, std::string help, Range range)
    : access_(access), value_(std::move(initial)), help_(std::move(help)), range_(std::move(range)) {
  if (type() == ValueType::Keyword && !std::holds_alternative<KeywordSet>(range_))
    throw Error(Errc::TypeMismatch, "keyword variable requires a keyword set");
  validate(value_);
}

void Variable::validate(const Value& v) const {
  if (const auto* set = std::get_if<KeywordSet>(&range_)) {
    if (const auto* kw = std::get_if<Keyword>(&v); kw && !set->contains(kw->value))
      throw Error(Errc::RangeViolation, "'" + kw->value + "' is not one of " + set->str());
    return;
  }
  const auto* r = std::get_if<NumericRange>(&range_);
  if (!r) return;
  auto check = [&](double x) {
    if (!r->contains(x))
      throw Error(Errc::RangeViolation, format_real(x) + " is outside " + r->str());
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, double>) {
          check(static_cast<double>(x));
        } else if constexpr (std::is_same_v<T, std::vector<double>> ||
                             std::is_same_v<T, std::vector<std::int64_t>>) {
          for (auto e : x) check(static_cast<double>(e));
        }
      },
      v);
}

void Variable::assign(Value v) {
  if (access_ == Access::monitor) throw Error(Errc::MonitorWrite, "variable is a read-only monitor");
  if (locked_) throw Error(Errc::PreparedStateError, "variable cannot change while prepared");
  if (type_of(v) != type())
    throw Error(Errc::TypeMismatch, std::string("expected ") + std::string(type_name(type())));
  if (pre_write_) pre_write_(*this, v);
  validate(v);
  Value old = std::exchange(value_, std::move(v));
  try {
    for (auto& hook : post_write_) hook(*this);
  } catch (...) {
    value_ = std::move(old);
    throw;
  }
}

void Variable::assign_text(std::string_view raw) {
  if (access_ == Access::monitor) throw Error(Errc::MonitorWrite, "variable is a read-only monitor");
  assign(parse_value(raw, type()));
}

void Variable::set(Value v) {
  if (type_of(v) != type())
    throw Error(Errc::TypeMismatch, std::string("expected ") + std::string(type_name(type())));
  value_ = std::move(v);
}

void Variable::refresh() {
  if (pre_read_) pre_read_(*this);
}

namespace {
template <class T>
const T& get_as(const Value& v) {
  if (const auto* p = std::get_if<T>(&v)) return *p;
  throw Error(Errc::TypeMismatch, "variable has a different type");
}
}  // namespace

std::int64_t Variable::as_int() const { return get_as<std::int64_t>(value_); }
double Variable::as_real() const { return get_as<double>(value_); }
bool Variable::as_bool() const { return get_as<bool>(value_); }
const std::string& Variable::as_text() const {
  if (const auto* k = std::get_if<Keyword>(&value_)) return k->value;
  return get_as<std::string>(value_);
}
const std::vector<double>& Variable::as_vec_real() const { return get_as<std::vector<double>>(value_); }
const std::vector<std::int64_t>& Variable::as_vec_int() const {
  return get_as<std::vector<std::int64_t>>(value_);
}
const std::vector<std::string>& Variable::as_vec_text() const {
  return get_as<std::vector<std::string>>(value_);
}

// ---- namespace -------------------------------------------------------------

Namespace::Namespace(std::string help) : help_(std::move(help)) {}
Namespace::Namespace(Namespace&&) noexcept = default;
Namespace& Namespace::operator=(Namespace&&) noexcept = default;
Namespace::~Namespace() = default;

Variable& Namespace::insert(std::string name, Variable var) {
  if (!is_identifier(name)) throw Error(Errc::SyntaxError, "invalid name '" + name + "'");
  if (find(name)) throw Error(Errc::DuplicateName, name + " already exists");
  children_.emplace_back(std::move(name), std::make_unique<ParamNode>(std::move(var)));
  return children_.back().second->variable();
}

Namespace& Namespace::add_namespace(std::string name, std::string help) {
  if (!is_identifier(name)) throw Error(Errc::SyntaxError, "invalid name '" + name + "'");
  if (find(name)) throw Error(Errc::DuplicateName, name + " already exists");
  children_.emplace_back(std::move(name), std::make_unique<ParamNode>(Namespace(std::move(help))));
  return children_.back().second->ns();
}

Namespace& Namespace::ensure_namespace(const std::string& name) {
  if (auto* node = find(name)) {
    if (!node->is_namespace()) throw Error(Errc::PathThroughLeaf, name + " is a variable");
    return node->ns();
  }
  return add_namespace(name);
}

ParamNode* Namespace::find(std::string_view name) noexcept {
  for (auto& [n, node] : children_)
    if (n == name) return node.get();
  return nullptr;
}

const ParamNode* Namespace::find(std::string_view name) const noexcept {
  for (const auto& [n, node] : children_)
    if (n == name) return node.get();
  return nullptr;
}

void Namespace::remove(std::string_view name) {
  auto it = std::find_if(children_.begin(), children_.end(),
                         [&](const auto& c) { return c.first == name; });
  if (it == children_.end()) throw Error(Errc::UnknownPath, std::string(name));
  children_.erase(it);
}

void Namespace::clear() noexcept { children_.clear(); }

// ---- path operations -------------------------------------------------------

const ParamNode& resolve(const Namespace& root, const NodePath& path) {
  if (path.empty()) throw Error(Errc::NotAVariable, "root is a namespace");
  const Namespace* ns = &root;
  const auto& segs = path.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const ParamNode* node = ns->find(segs[i]);
    if (!node) throw Error(Errc::UnknownPath, path.str());
    if (i + 1 == segs.size()) return *node;
    if (!node->is_namespace()) throw Error(Errc::UnknownPath, path.str());
    ns = &node->ns();
  }
  throw Error(Errc::UnknownPath, path.str());
}

ParamNode& resolve(Namespace& root, const NodePath& path) {
  return const_cast<ParamNode&>(resolve(static_cast<const Namespace&>(root), path));
}

Variable& resolve_variable(Namespace& root, const NodePath& path) {
  ParamNode& node = resolve(root, path);
  if (node.is_namespace()) throw Error(Errc::NotAVariable, path.str() + " is a namespace");
  return node.variable();
}

Namespace& resolve_namespace(Namespace& root, const NodePath& path) {
  if (path.empty()) return root;
  ParamNode& node = resolve(root, path);
  if (!node.is_namespace()) throw Error(Errc::NotANamespace, path.str() + " is a variable");
  return node.ns();
}

Variable& insert(Namespace& root, const NodePath& path, Variable var) {
  if (path.empty()) throw Error(Errc::SyntaxError, "cannot insert at the root path");
  Namespace* ns = &root;
  const auto& segs = path.segments();
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    ParamNode* node = ns->find(segs[i]);
    if (!node) {
      ns = &ns->add_namespace(segs[i]);
    } else if (!node->is_namespace()) {
      throw Error(Errc::PathThroughLeaf, path.str() + ": " + segs[i] + " is a variable");
    } else {
      ns = &node->ns();
    }
  }
  if (ns->find(path.leaf())) throw Error(Errc::DuplicateName, path.str() + " already exists");
  return ns->insert(path.leaf(), std::move(var));
}

void assign(Namespace& root, const NodePath& path, std::string_view raw_text) {
  resolve_variable(root, path).assign_text(raw_text);
}

std::string query(Namespace& root, const NodePath& path) {
  Variable& v = resolve_variable(root, path);
  v.refresh();
  return format_value(v.value());
}

std::vector<ListEntry> list(const Namespace& root, const NodePath& path) {
  const Namespace* ns = &root;
  if (!path.empty()) {
    const ParamNode& node = resolve(root, path);
    if (!node.is_namespace()) throw Error(Errc::NotANamespace, path.str() + " is a variable");
    ns = &node.ns();
  }
  std::vector<ListEntry> out;
  out.reserve(ns->size());
  for (const auto& [name, node] : ns->children()) {
    if (node->is_namespace()) {
      out.push_back({name, "namespace", "namespace"});
    } else {
      const Variable& v = node->variable();
      out.push_back({name, v.access() == Access::monitor ? "monitor" : "writable",
                     std::string(type_name(v.type()))});
    }
  }
  return out;
}

void remove_subtree(Namespace& root, const NodePath& path) {
  if (path.empty()) {
    root.clear();
    return;
  }
  Namespace* parent = &root;
  if (path.size() > 1) {
    ParamNode& p = resolve(root, path.parent());
    if (!p.is_namespace()) throw Error(Errc::UnknownPath, path.str());
    parent = &p.ns();
  }
  if (!parent->find(path.leaf())) throw Error(Errc::UnknownPath, path.str());
  parent->remove(path.leaf());
}

}  // namespace mha
