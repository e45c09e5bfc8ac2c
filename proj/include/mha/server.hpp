#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "mha/engine.hpp"

namespace mha {

struct ServerConfig {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 33337;                  // 0 = ephemeral
  std::optional<std::uint16_t> ws_port = 33338;  // nullopt disables the WebSocket bridge
};

/// Minimum cadence of WebSocket monitor subscriptions.
inline constexpr int kMinSubscriptionMs = 50;

/// TCP line-protocol server plus WebSocket bridge (endpoint `/mha`).
/// All sessions are served by the thread calling run(), which is the
/// engine's control thread.
class Server {
 public:
  Server(Engine& engine, const ServerConfig& config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t tcp_port() const noexcept;
  /// 0 when the bridge is disabled.
  std::uint16_t ws_port() const noexcept;

  /// Serves until `cmd=quit` is executed or stop() is called.
  void run();
  /// Thread-safe.
  void stop();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

/// Parses `?subscribe:<path>:<ms>`; returns nullopt for other lines and
/// throws SyntaxError for malformed subscribe commands.
struct Subscribe {
  std::string path;
  int interval_ms = 0;  // already clamped to kMinSubscriptionMs
};
std::optional<Subscribe> parse_subscribe(const std::string& line);
/// Parses `?unsubscribe:<path>`.
std::optional<std::string> parse_unsubscribe(const std::string& line);

}  // namespace mha
