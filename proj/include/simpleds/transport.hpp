#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "simpleds/protocol.hpp"

namespace simpleds {

// Owning socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close();

  // Throws TransportError on failure.
  void send_all(std::string_view data) const;

 private:
  int fd_ = -1;
};

// Buffered reader for newline-delimited messages.
class LineReader {
 public:
  enum class Status { line, timeout, closed };

  explicit LineReader(const Socket& socket) : socket_(socket) {}
  // Waits up to timeout_ms (negative: forever) for a complete line.
  Status read_line(std::string& line, int timeout_ms);

 private:
  const Socket& socket_;
  std::string buffer_;
};

Socket listen_tcp(int port, int& bound_port);
Socket connect_tcp(const std::string& host, int port);

// RFC 6455 handshake value for a Sec-WebSocket-Key.
std::string websocket_accept_key(std::string_view client_key);

struct ServerOptions {
  std::shared_ptr<const DataPack> data;
  EnvironmentConfig env;
  std::shared_ptr<const QNetwork> policy;  // drives interactive sessions when set
  int port = 7777;                         // 0 picks a free port
  int ws_port = -1;                        // -1 disables, 0 picks a free port
  double human_timeout_s = 120.0;
  std::uint64_t seed = 1;
  std::string transcript_dir;
};

// Listens for protocol clients over plain TCP (newline-delimited JSON) and,
// optionally, over WebSocket text frames carrying the same messages. Each
// connection gets its own Session and RNG stream.
class EnvironmentServer {
 public:
  explicit EnvironmentServer(ServerOptions options);
  ~EnvironmentServer();
  EnvironmentServer(const EnvironmentServer&) = delete;
  EnvironmentServer& operator=(const EnvironmentServer&) = delete;

  void start();
  void stop();
  // Blocks until stop() is called from another thread or a signal handler flag.
  void wait(const std::atomic<bool>* external_stop = nullptr);

  int port() const { return port_; }
  int ws_port() const { return ws_port_; }
  std::uint64_t sessions_started() const { return sessions_.load(); }

 private:
  void accept_loop(Socket& listener, bool websocket);
  void serve_tcp(Socket socket, std::uint64_t session_id);
  void serve_websocket(Socket socket, std::uint64_t session_id);
  std::unique_ptr<Session> make_session(std::uint64_t session_id) const;
  void save_transcript(const Session& session, std::uint64_t session_id) const;

  ServerOptions options_;
  Socket listener_;
  Socket ws_listener_;
  int port_ = 0;
  int ws_port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> sessions_{0};
  std::mutex threads_mutex_;
  std::vector<std::thread> threads_;
};

// Learning client speaking the protocol to a remote server.
class TcpEnvironment final : public ProtocolClient {
 public:
  TcpEnvironment(const std::string& host, int port, SessionMode mode = SessionMode::simulated,
                 int timeout_ms = 30000);

 protected:
  std::string exchange(const std::string& line) override;

 private:
  Socket socket_;
  LineReader reader_;
  int timeout_ms_;
};

}  // namespace simpleds
