#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mha/engine.hpp"
#include "mha/server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hearing-aid processing engine. Each COMMAND is one configuration-language line."};
  int port = 33337;
  int ws_port = 33338;
  bool no_network = false;
  std::vector<std::string> commands;
  app.add_option("--port", port, "TCP port for the line protocol (0 = ephemeral)")
      ->envname("MHA_PORT")
      ->check(CLI::Range(0, 65535));
  app.add_option("--ws-port", ws_port, "WebSocket port (0 = ephemeral, -1 = disabled)")->check(CLI::Range(-1, 65535));
  app.add_flag("--no-network", no_network, "Execute the commands, wait for file IO to finish, and exit");
  app.add_option("commands", commands, "Configuration commands, e.g. ?read:configs/14_dc_simple.cfg cmd=start");
  app.positionals_at_end();
  CLI11_PARSE(app, argc, argv);

  try {
    mha::Engine engine;
    for (const auto& c : commands) {
      const mha::Response r = engine.execute(c);
      for (const auto& line : r.payload) std::cout << line << '\n';
      if (!r.is_ok()) {
        std::cerr << "mha: " << c << ": (ERR:" << mha::to_string(*r.error) << ") " << r.message << '\n';
        return 1;
      }
    }
    std::cout.flush();
    if (no_network) {
      engine.wait_io();
      return 0;
    }
    if (engine.quit_requested()) return 0;

    mha::ServerConfig cfg;
    cfg.port = static_cast<std::uint16_t>(port);
    if (ws_port >= 0)
      cfg.ws_port = static_cast<std::uint16_t>(ws_port);
    else
      cfg.ws_port.reset();
    mha::Server server(engine, cfg);
    std::cout << "mha: listening on " << cfg.bind_address << " tcp " << server.tcp_port();
    if (cfg.ws_port) std::cout << " ws " << server.ws_port() << " /mha";
    std::cout << std::endl;
    server.run();
    return 0;
  } catch (const mha::Error& e) {
    std::cerr << "mha: (ERR:" << mha::to_string(e.code()) << ") " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "mha: " << e.what() << '\n';
    return 1;
  }
}
