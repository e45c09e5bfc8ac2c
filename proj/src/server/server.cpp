#include "mha/server.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <iostream>
#include <map>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace mha {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr std::string_view kSubscribe = "?subscribe:";
constexpr std::string_view kUnsubscribe = "?unsubscribe:";
constexpr auto kPollInterval = std::chrono::milliseconds(50);

std::string strip_line_end(std::string line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  return line;
}

}  // namespace

std::optional<Subscribe> parse_subscribe(const std::string& line) {
  if (!line.starts_with(kSubscribe)) return std::nullopt;
  const std::string rest = line.substr(kSubscribe.size());
  const auto colon = rest.rfind(':');
  if (colon == std::string::npos)
    throw Error(Errc::SyntaxError, "expected ?subscribe:<path>:<interval_ms>");
  Subscribe s;
  s.path = rest.substr(0, colon);
  if (s.path.empty()) throw Error(Errc::SyntaxError, "missing subscription path");
  const std::string ms = rest.substr(colon + 1);
  auto [p, ec] = std::from_chars(ms.data(), ms.data() + ms.size(), s.interval_ms);
  if (ec != std::errc{} || p != ms.data() + ms.size() || s.interval_ms <= 0)
    throw Error(Errc::SyntaxError, "invalid subscription interval '" + ms + "'");
  s.interval_ms = std::max(s.interval_ms, kMinSubscriptionMs);
  NodePath::parse(s.path);
  return s;
}

std::optional<std::string> parse_unsubscribe(const std::string& line) {
  if (!line.starts_with(kUnsubscribe)) return std::nullopt;
  return line.substr(kUnsubscribe.size());
}

struct Server::Impl {
  Engine& engine;
  asio::io_context ioc{1};
  tcp::acceptor tcp_acceptor{ioc};
  std::optional<tcp::acceptor> ws_acceptor;
  asio::steady_timer poll_timer{ioc};

  Impl(Engine& e, const ServerConfig& cfg) : engine(e) {
    const auto addr = asio::ip::make_address(cfg.bind_address);
    open(tcp_acceptor, tcp::endpoint(addr, cfg.port));
    if (cfg.ws_port) {
      ws_acceptor.emplace(ioc);
      open(*ws_acceptor, tcp::endpoint(addr, *cfg.ws_port));
    }
  }

  static void open(tcp::acceptor& a, const tcp::endpoint& ep) {
    try {
      a.open(ep.protocol());
      a.set_option(asio::socket_base::reuse_address(true));
      a.bind(ep);
      a.listen();
    } catch (const boost::system::system_error& e) {
      throw Error(Errc::IoError, "cannot listen on port " + std::to_string(ep.port()) + ": " + e.what());
    }
  }

  Response execute(const std::string& line) { return engine.execute(line); }

  void after_command() {
    if (engine.quit_requested()) shutdown();
  }

  void shutdown() {
    beast::error_code ec;
    tcp_acceptor.close(ec);
    if (ws_acceptor) ws_acceptor->close(ec);
    ioc.stop();
  }

  void schedule_poll() {
    poll_timer.expires_after(kPollInterval);
    poll_timer.async_wait([this](beast::error_code ec) {
      if (ec) return;
      engine.poll();
      schedule_poll();
    });
  }

  void accept_tcp();
  void accept_ws();
};

namespace {

class TcpSession : public std::enable_shared_from_this<TcpSession> {
 public:
  TcpSession(tcp::socket socket, Server::Impl& server) : socket_(std::move(socket)), server_(server) {}

  void start() {
    beast::error_code ec;
    socket_.set_option(tcp::no_delay(true), ec);
    read();
  }

 private:
  void read() {
    asio::async_read_until(socket_, buffer_, '\n', [self = shared_from_this()](beast::error_code ec, std::size_t n) {
      if (ec) return;
      std::string line(asio::buffers_begin(self->buffer_.data()), asio::buffers_begin(self->buffer_.data()) + n);
      self->buffer_.consume(n);
      self->reply_ = self->server_.execute(strip_line_end(std::move(line))).wire();
      asio::async_write(self->socket_, asio::buffer(self->reply_), [self](beast::error_code ec2, std::size_t) {
        self->server_.after_command();
        if (!ec2) self->read();
      });
    });
  }

  tcp::socket socket_;
  Server::Impl& server_;
  asio::streambuf buffer_;
  std::string reply_;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Server::Impl& server) : ws_(std::move(socket)), server_(server) {}

  void start() {
    beast::error_code ec;
    ws_.next_layer().set_option(tcp::no_delay(true), ec);
    http::async_read(ws_.next_layer(), http_buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (ec) return;
                       self->on_request();
                     });
  }

 private:
  void on_request() {
    if (!websocket::is_upgrade(request_) || request_.target() != "/mha") {
      auto res = std::make_shared<http::response<http::string_body>>(http::status::not_found, request_.version());
      res->set(http::field::content_type, "text/plain");
      res->body() = "WebSocket endpoint is /mha\n";
      res->prepare_payload();
      http::async_write(ws_.next_layer(), *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
        beast::error_code ec;
        self->ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
      });
      return;
    }
    ws_.text(true);
    ws_.async_accept(request_, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->read();
    });
  }

  void read() {
    ws_.async_read(frame_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      std::string text = beast::buffers_to_string(self->frame_.data());
      self->frame_.consume(self->frame_.size());
      std::size_t start = 0;
      while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = strip_line_end(text.substr(start, end - start));
        if (!(line.empty() && end == text.size() && start > 0)) self->send(self->handle(line));
        start = end + 1;
      }
      self->server_.after_command();
      self->read();
    });
  }

  std::string handle(const std::string& line) {
    try {
      if (auto sub = parse_subscribe(line)) return subscribe(*sub).wire();
      if (auto path = parse_unsubscribe(line)) return unsubscribe(*path).wire();
    } catch (const Error& e) {
      return Response::err(e.code(), e.what()).wire();
    }
    return server_.execute(line).wire();
  }

  Response subscribe(const Subscribe& s) {
    const Variable& v = resolve_variable(server_.engine.root(), NodePath::parse(s.path));
    if (v.access() != Access::monitor) throw Error(Errc::NotAMonitor, s.path + " is not a monitor");
    auto& timer = subs_[s.path];
    if (!timer) timer = std::make_unique<asio::steady_timer>(server_.ioc);
    timer->cancel();
    tick(s.path, std::chrono::milliseconds(s.interval_ms), ++generation_);
    gen_[s.path] = generation_;
    return Response::ok();
  }

  Response unsubscribe(const std::string& path) {
    auto it = subs_.find(path);
    if (it == subs_.end()) throw Error(Errc::UnknownPath, path + " is not subscribed");
    it->second->cancel();
    subs_.erase(it);
    gen_.erase(path);
    return Response::ok();
  }

  void tick(const std::string& path, std::chrono::milliseconds interval, std::uint64_t gen) {
    auto it = subs_.find(path);
    if (it == subs_.end()) return;
    it->second->expires_after(interval);
    it->second->async_wait([self = shared_from_this(), path, interval, gen](beast::error_code ec) {
      if (ec || self->closed_) return;
      auto g = self->gen_.find(path);
      if (g == self->gen_.end() || g->second != gen) return;
      Response r = self->server_.execute(path + "?");
      if (r.is_ok() && !r.payload.empty())
        self->send("! " + path + " = " + r.payload.front() + "\n");
      else
        self->send(r.wire());
      self->tick(path, interval, gen);
    });
  }

  void send(std::string msg) {
    if (closed_) return;
    queue_.push_back(std::move(msg));
    if (queue_.size() == 1) write_next();
  }

  void write_next() {
    ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write_next();
    });
  }

  void close() {
    closed_ = true;
    for (auto& [p, t] : subs_) t->cancel();
    subs_.clear();
    gen_.clear();
  }

  websocket::stream<tcp::socket> ws_;
  Server::Impl& server_;
  beast::flat_buffer http_buffer_;
  http::request<http::string_body> request_;
  beast::flat_buffer frame_;
  std::deque<std::string> queue_;
  std::map<std::string, std::unique_ptr<asio::steady_timer>> subs_;
  std::map<std::string, std::uint64_t> gen_;
  std::uint64_t generation_ = 0;
  bool closed_ = false;
};

}  // namespace

void Server::Impl::accept_tcp() {
  tcp_acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<TcpSession>(std::move(socket), *this)->start();
    accept_tcp();
  });
}

void Server::Impl::accept_ws() {
  ws_acceptor->async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<WsSession>(std::move(socket), *this)->start();
    accept_ws();
  });
}

Server::Server(Engine& engine, const ServerConfig& config) : impl_(std::make_unique<Impl>(engine, config)) {}

Server::~Server() = default;

std::uint16_t Server::tcp_port() const noexcept { return impl_->tcp_acceptor.local_endpoint().port(); }

std::uint16_t Server::ws_port() const noexcept {
  return impl_->ws_acceptor ? impl_->ws_acceptor->local_endpoint().port() : 0;
}

void Server::run() {
  if (impl_->engine.quit_requested()) return;
  impl_->accept_tcp();
  if (impl_->ws_acceptor) impl_->accept_ws();
  impl_->schedule_poll();
  impl_->ioc.run();
}

void Server::stop() {
  asio::post(impl_->ioc, [this] { impl_->shutdown(); });
}

}  // namespace mha
