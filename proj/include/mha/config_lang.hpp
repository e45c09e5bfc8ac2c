#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mha/error.hpp"
#include "mha/param_tree.hpp"

namespace mha {

/// Canonical text form of a value. Reals use the shortest decimal that
/// round-trips to the same double; booleans print as `yes`/`no`; vectors as
/// `[e1 e2 ... en]`.
std::string format_value(const Value& v);
std::string format_real(double x);

/// Parses `text` as a value of type `t`. Range membership is not checked
/// here (see Variable::assign). Throws Error(TypeMismatch).
Value parse_value(std::string_view text, ValueType t);

namespace cmd {
struct Empty {
  friend bool operator==(const Empty&, const Empty&) = default;
};
struct Assign {
  NodePath path;
  std::string value;
  friend bool operator==(const Assign&, const Assign&) = default;
};
struct Query {
  NodePath path;
  friend bool operator==(const Query&, const Query&) = default;
};
struct QueryType {
  NodePath path;
  friend bool operator==(const QueryType&, const QueryType&) = default;
};
struct QueryHelp {
  NodePath path;
  friend bool operator==(const QueryHelp&, const QueryHelp&) = default;
};
struct ListSubtree {
  NodePath path;
  friend bool operator==(const ListSubtree&, const ListSubtree&) = default;
};
struct ReadFile {
  std::string filename;
  friend bool operator==(const ReadFile&, const ReadFile&) = default;
};
}  // namespace cmd

using Command = std::variant<cmd::Empty, cmd::Assign, cmd::Query, cmd::QueryType,
                             cmd::QueryHelp, cmd::ListSubtree, cmd::ReadFile>;

/// Parses one logical line of the configuration language:
///
///     # comment            (or blank)     -> Empty
///     ?read:<file>                        -> ReadFile
///     <path>?                             -> Query
///     <path>?type | ?help | ?list         -> QueryType / QueryHelp / ListSubtree
///     ?list                               -> ListSubtree of the root
///     <path> = <value text>               -> Assign
///
/// Trailing `#` comments after a value are stripped unless inside brackets.
/// Throws Error(SyntaxError) with a 1-based column in the message.
Command parse_line(std::string_view line);

/// Inverse of parse_line for assignments.
std::string format_command(const cmd::Assign& a);

struct Response {
  std::vector<std::string> payload;
  std::optional<Errc> error;
  std::string message;

  static Response ok(std::vector<std::string> payload = {});
  static Response err(Errc code, std::string message);

  bool is_ok() const noexcept { return !error.has_value(); }
  /// Wire form: payload lines, then `(OK)` or `(ERR:<code>) <message>`,
  /// each terminated by LF.
  std::string wire() const;
};

/// Executes commands against a parameter tree. Side effects such as plugin
/// loading happen through variable hooks installed by the tree's owners.
class Interpreter {
 public:
  explicit Interpreter(Namespace& root) : root_(root) {}

  Response execute(const Command& command);
  Response execute_line(std::string_view line);
  Response read_file(const std::filesystem::path& filename);

 private:
  Response read_file(const std::filesystem::path& filename, int depth);
  Response dispatch(const Command& command, int depth);

  Namespace& root_;
};

}  // namespace mha
