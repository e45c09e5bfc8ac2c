#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <boost/asio.hpp>

#include "mha/server.hpp"

namespace mha::test {

/// A server on ephemeral ports, run on its own control thread.
struct RunningServer {
  Server server;
  std::thread thread;

  RunningServer(Engine& e, bool websocket = false)
      : server(e, ServerConfig{"127.0.0.1", 0, websocket ? std::optional<std::uint16_t>(0) : std::nullopt}),
        thread([this] { server.run(); }) {}
  ~RunningServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
};

inline bool is_status_line(const std::string& l) { return l.starts_with("(OK)") || l.starts_with("(ERR:"); }

/// Blocking line-protocol client.
class LineClient {
 public:
  explicit LineClient(std::uint16_t port) : socket_(ioc_) {
    socket_.connect({boost::asio::ip::make_address("127.0.0.1"), port});
  }
  void send(const std::string& text) { boost::asio::write(socket_, boost::asio::buffer(text)); }
  std::string read_line() {
    boost::asio::read_until(socket_, buf_, '\n');
    std::istream is(&buf_);
    std::string line;
    std::getline(is, line);
    return line;
  }
  /// Reads lines up to and including the n-th status line.
  std::string read_responses(std::size_t n) {
    std::string out;
    while (n > 0) {
      auto l = read_line();
      out += l + "\n";
      if (is_status_line(l)) --n;
    }
    return out;
  }
  std::string request(const std::string& line) {
    send(line + "\n");
    return read_responses(1);
  }

 private:
  boost::asio::io_context ioc_;
  boost::asio::ip::tcp::socket socket_;
  boost::asio::streambuf buf_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

/// Replays tests/golden/<name>.in over TCP against a fresh engine and
/// returns {expected, actual}.
inline std::pair<std::string, std::string> replay_golden(const std::filesystem::path& golden, const std::string& name) {
  const std::string cfg = (std::filesystem::path(MHA_SOURCE_DIR) / "configs").string();
  const std::string script = replace_all(slurp(golden / (name + ".in")), "@CONFIG_DIR@", cfg);
  const std::string expected = replace_all(slurp(golden / (name + ".out")), "@CONFIG_DIR@", cfg);
  Engine engine;
  RunningServer rs(engine);
  LineClient client(rs.server.tcp_port());
  client.send(script);
  std::size_t lines = 0;
  for (char c : script) lines += c == '\n';
  return {expected, client.read_responses(lines)};
}

}  // namespace mha::test
