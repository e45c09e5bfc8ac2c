#include "mha/config_lang.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

namespace mha {

namespace {

constexpr std::string_view kSpace = " \t\r\n\v\f";

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

bool is_space(char c) { return kSpace.find(c) != std::string_view::npos; }

[[noreturn]] void mismatch(std::string_view text, ValueType t) {
  throw Error(Errc::TypeMismatch, "cannot parse '" + std::string(text) + "' as " +
                                      std::string(type_name(t)));
}

std::int64_t parse_int(std::string_view s, ValueType t) {
  std::int64_t v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) mismatch(s, t);
  return v;
}

double parse_real(std::string_view s, ValueType t) {
  double v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) mismatch(s, t);
  return v;
}

std::vector<std::string_view> vector_tokens(std::string_view text, ValueType t) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') mismatch(text, t);
  auto body = text.substr(1, text.size() - 2);
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < body.size()) {
    if (is_space(body[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < body.size() && !is_space(body[j])) {
      if (body[j] == '[' || body[j] == ']') mismatch(text, t);
      ++j;
    }
    tokens.push_back(body.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

std::string format_real(double x) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), p);
}

std::string format_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_real(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "yes" : "no";
        } else if constexpr (std::is_same_v<T, Keyword>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          std::string out = "[";
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out += ' ';
            if constexpr (std::is_same_v<T, std::vector<double>>)
              out += format_real(x[i]);
            else if constexpr (std::is_same_v<T, std::vector<std::int64_t>>)
              out += std::to_string(x[i]);
            else
              out += x[i];
          }
          return out + "]";
        }
      },
      v);
}

Value parse_value(std::string_view text, ValueType t) {
  text = trim(text);
  switch (t) {
    case ValueType::Int:
      return parse_int(text, t);
    case ValueType::Real:
      return parse_real(text, t);
    case ValueType::Bool:
      if (text == "yes" || text == "true" || text == "1") return true;
      if (text == "no" || text == "false" || text == "0") return false;
      mismatch(text, t);
    case ValueType::Keyword:
      if (text.empty() || text.find_first_of(kSpace) != std::string_view::npos) mismatch(text, t);
      return Keyword{std::string(text)};
    case ValueType::Text:
      return std::string(text);
    case ValueType::VecReal: {
      std::vector<double> out;
      for (auto tok : vector_tokens(text, t)) out.push_back(parse_real(tok, t));
      return out;
    }
    case ValueType::VecInt: {
      std::vector<std::int64_t> out;
      for (auto tok : vector_tokens(text, t)) out.push_back(parse_int(tok, t));
      return out;
    }
    case ValueType::VecText: {
      std::vector<std::string> out;
      for (auto tok : vector_tokens(text, t)) out.emplace_back(tok);
      return out;
    }
  }
  mismatch(text, t);
}

// ---- line grammar ----------------------------------------------------------

namespace {

[[noreturn]] void syntax(std::size_t column, const std::string& what) {
  throw Error(Errc::SyntaxError, "column " + std::to_string(column) + ": " + what);
}

NodePath parse_path_at(std::string_view text, std::size_t column) {
  try {
    return NodePath::parse(text);
  } catch (const Error&) {
    syntax(column, "invalid path '" + std::string(text) + "'");
  }
}

std::string_view strip_comment(std::string_view value) {
  int depth = 0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    char c = value[i];
    if (c == '[') ++depth;
    if (c == ']' && depth > 0) --depth;
    if (c == '#' && depth == 0) return value.substr(0, i);
  }
  return value;
}

}  // namespace

Command parse_line(std::string_view raw) {
  std::string line;
  line.reserve(raw.size());
  for (char c : raw) {
    if (c == '\n') syntax(line.size() + 1, "embedded newline");
    if (c != '\r') line += c;
  }
  std::string_view s = line;
  auto lead = s.find_first_not_of(kSpace);
  if (lead == std::string_view::npos || s[lead] == '#') return cmd::Empty{};
  s = trim(s);
  const std::size_t base = lead + 1;  // column of s[0]

  if (s.starts_with("?read:")) {
    auto file = trim(s.substr(6));
    if (file.empty()) syntax(base + 6, "missing file name");
    return cmd::ReadFile{std::string(file)};
  }
  if (s == "?list") return cmd::ListSubtree{};
  if (s.front() == '?') syntax(base, "unknown command '" + std::string(s) + "'");

  std::size_t i = 0;
  auto path_char = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '.';
  };
  while (i < s.size() && path_char(s[i])) ++i;
  if (i == 0) syntax(base, "expected a variable path");
  NodePath path = parse_path_at(s.substr(0, i), base);
  std::size_t j = i;
  while (j < s.size() && is_space(s[j])) ++j;
  if (j == s.size()) syntax(base + j, "expected '=' or '?'");
  if (s[j] == '=') {
    auto value = trim(strip_comment(s.substr(j + 1)));
    return cmd::Assign{std::move(path), std::string(value)};
  }
  if (s[j] == '?') {
    auto suffix = trim(s.substr(j + 1));
    if (suffix.empty()) return cmd::Query{std::move(path)};
    if (suffix == "type") return cmd::QueryType{std::move(path)};
    if (suffix == "help") return cmd::QueryHelp{std::move(path)};
    if (suffix == "list") return cmd::ListSubtree{std::move(path)};
    syntax(base + j + 1, "unknown query '" + std::string(suffix) + "'");
  }
  syntax(base + j, std::string("unexpected character '") + s[j] + "'");
}

std::string format_command(const cmd::Assign& a) {
  return a.path.str() + " = " + a.value;
}

// ---- responses -------------------------------------------------------------

Response Response::ok(std::vector<std::string> payload) {
  Response r;
  r.payload = std::move(payload);
  return r;
}

Response Response::err(Errc code, std::string message) {
  Response r;
  r.error = code;
  r.message = std::move(message);
  return r;
}

std::string Response::wire() const {
  std::string out;
  for (const auto& line : payload) {
    // A leading "(" is reserved for the status line.
    if (!line.empty() && line.front() == '(') out += ' ';
    for (char c : line) out += (c == '\n' || c == '\r') ? ' ' : c;
    out += '\n';
  }
  if (!error) return out + "(OK)\n";
  out += "(ERR:";
  out += to_string(*error);
  out += ")";
  if (!message.empty()) {
    out += ' ';
    for (char c : message) out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out + '\n';
}

// ---- interpreter -----------------------------------------------------------

namespace {
constexpr int kMaxReadDepth = 16;
}

Response Interpreter::execute(const Command& command) { return dispatch(command, 0); }

Response Interpreter::execute_line(std::string_view line) {
  try {
    return dispatch(parse_line(line), 0);
  } catch (const Error& e) {
    return Response::err(e.code(), e.what());
  }
}

Response Interpreter::read_file(const std::filesystem::path& filename) {
  return read_file(filename, 0);
}

Response Interpreter::dispatch(const Command& command, int depth) {
  try {
    return std::visit(
        [&](const auto& c) -> Response {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, cmd::Empty>) {
            return Response::ok();
          } else if constexpr (std::is_same_v<T, cmd::Assign>) {
            assign(root_, c.path, c.value);
            return Response::ok();
          } else if constexpr (std::is_same_v<T, cmd::Query>) {
            return Response::ok({query(root_, c.path)});
          } else if constexpr (std::is_same_v<T, cmd::QueryType>) {
            if (c.path.empty()) return Response::ok({"namespace"});
            const ParamNode& node = resolve(root_, c.path);
            if (node.is_namespace()) return Response::ok({"namespace"});
            return Response::ok({std::string(type_name(node.variable().type()))});
          } else if constexpr (std::is_same_v<T, cmd::QueryHelp>) {
            if (c.path.empty()) return Response::ok({root_.help()});
            const ParamNode& node = resolve(root_, c.path);
            if (node.is_namespace()) return Response::ok({node.ns().help()});
            const Variable& v = node.variable();
            std::vector<std::string> lines{v.help()};
            if (const auto* r = std::get_if<NumericRange>(&v.range())) lines.push_back("range " + r->str());
            if (const auto* k = std::get_if<KeywordSet>(&v.range())) lines.push_back("range " + k->str());
            return Response::ok(std::move(lines));
          } else if constexpr (std::is_same_v<T, cmd::ListSubtree>) {
            std::vector<std::string> lines;
            for (const auto& e : list(root_, c.path)) {
              if (e.kind == "namespace")
                lines.push_back(e.name + " namespace");
              else
                lines.push_back(e.name + " " + e.kind + " " + e.type);
            }
            return Response::ok(std::move(lines));
          } else {
            return read_file(c.filename, depth + 1);
          }
        },
        command);
  } catch (const Error& e) {
    return Response::err(e.code(), e.what());
  } catch (const std::exception& e) {
    return Response::err(Errc::InternalError, e.what());
  }
}

Response Interpreter::read_file(const std::filesystem::path& filename, int depth) {
  if (depth > kMaxReadDepth) return Response::err(Errc::IoError, "?read nesting too deep");
  std::ifstream in(filename, std::ios::binary);
  if (!in) return Response::err(Errc::IoError, "cannot open " + filename.string());
  Response total = Response::ok();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    Response r;
    try {
      r = dispatch(parse_line(line), depth);
    } catch (const Error& e) {
      r = Response::err(e.code(), e.what());
    }
    total.payload.insert(total.payload.end(), r.payload.begin(), r.payload.end());
    if (!r.is_ok()) {
      total.error = r.error;
      total.message = filename.string() + ":" + std::to_string(lineno) + ": " + r.message;
      return total;
    }
  }
  return total;
}

}  // namespace mha
