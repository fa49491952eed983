#include "simpleds/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <openssl/evp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace simpleds {

namespace {

constexpr int kPollSliceMs = 100;
constexpr std::size_t kMaxLineBytes = 1 << 20;

// Waits until fd is readable, honouring the server stop flag.
enum class Wait { ready, timeout, stopped };

Wait wait_readable(int fd, int timeout_ms, const std::atomic<bool>& stopping) {
  const auto start = std::chrono::steady_clock::now();
  while (!stopping.load()) {
    pollfd p{fd, POLLIN, 0};
    const int rc = ::poll(&p, 1, kPollSliceMs);
    if (rc > 0) return Wait::ready;
    if (rc < 0 && errno != EINTR) return Wait::ready;  // let the read report it
    if (timeout_ms >= 0) {
      const auto waited = std::chrono::steady_clock::now() - start;
      if (waited >= std::chrono::milliseconds(timeout_ms)) return Wait::timeout;
    }
  }
  return Wait::stopped;
}

}  // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::send_all(std::string_view data) const {
  while (!data.empty()) {
    const ssize_t n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("send failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

LineReader::Status LineReader::read_line(std::string& line, int timeout_ms) {
  const auto start = std::chrono::steady_clock::now();
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      buffer_.erase(0, nl + 1);
      return Status::line;
    }
    int remaining = -1;
    if (timeout_ms >= 0) {
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      remaining = static_cast<int>(std::max<long long>(0, timeout_ms - elapsed));
    }
    pollfd p{socket_.fd(), POLLIN, 0};
    const int rc = ::poll(&p, 1, remaining);
    if (rc == 0) return Status::timeout;
    if (rc < 0) {
      if (errno == EINTR) continue;
      return Status::closed;
    }
    char chunk[4096];
    const ssize_t n = ::recv(socket_.fd(), chunk, sizeof chunk, 0);
    if (n <= 0) return Status::closed;
    buffer_.append(chunk, static_cast<std::size_t>(n));
    if (buffer_.size() > kMaxLineBytes) return Status::closed;
  }
}

Socket listen_tcp(int port, int& bound_port) {
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (!s.valid()) throw TransportError("socket() failed");
  const int yes = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw TransportError("cannot bind port " + std::to_string(port) + ": " + std::strerror(errno));
  }
  if (::listen(s.fd(), 16) != 0) throw TransportError("listen() failed");
  socklen_t len = sizeof addr;
  ::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  bound_port = ntohs(addr.sin_port);
  return s;
}

Socket connect_tcp(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &found) != 0 || !found) {
    throw TransportError("cannot resolve " + host);
  }
  Socket s(::socket(found->ai_family, found->ai_socktype, found->ai_protocol));
  const int rc = s.valid() ? ::connect(s.fd(), found->ai_addr, found->ai_addrlen) : -1;
  ::freeaddrinfo(found);
  if (rc != 0) {
    throw TransportError("cannot connect to " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
  }
  const int yes = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
  return s;
}

std::string websocket_accept_key(std::string_view client_key) {
  static constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
  std::string input(client_key);
  input += kGuid;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  EVP_Digest(input.data(), input.size(), digest, &digest_len, EVP_sha1(), nullptr);
  unsigned char encoded[64];
  const int n = EVP_EncodeBlock(encoded, digest, static_cast<int>(digest_len));
  return std::string(reinterpret_cast<char*>(encoded), static_cast<std::size_t>(n));
}

EnvironmentServer::EnvironmentServer(ServerOptions options) : options_(std::move(options)) {
  if (!options_.data) throw ContractError("server needs a data pack");
}

EnvironmentServer::~EnvironmentServer() { stop(); }

void EnvironmentServer::start() {
  listener_ = listen_tcp(options_.port, port_);
  if (options_.ws_port >= 0) ws_listener_ = listen_tcp(options_.ws_port, ws_port_);
  std::lock_guard lock(threads_mutex_);
  threads_.emplace_back([this] { accept_loop(listener_, false); });
  if (ws_listener_.valid()) threads_.emplace_back([this] { accept_loop(ws_listener_, true); });
}

void EnvironmentServer::stop() {
  if (stopping_.exchange(true)) return;
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(threads_mutex_);
    threads.swap(threads_);
  }
  for (auto& t : threads) {
    if (t.joinable()) t.join();
  }
  // Connection threads spawned while joining the acceptors.
  std::lock_guard lock(threads_mutex_);
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
  threads_.clear();
  listener_.close();
  ws_listener_.close();
}

void EnvironmentServer::wait(const std::atomic<bool>* external_stop) {
  while (!stopping_.load() && !(external_stop && external_stop->load())) {
    std::this_thread::sleep_for(std::chrono::milliseconds(kPollSliceMs));
  }
}

void EnvironmentServer::accept_loop(Socket& listener, bool websocket) {
  while (true) {
    const Wait w = wait_readable(listener.fd(), -1, stopping_);
    if (w != Wait::ready) return;
    Socket client(::accept(listener.fd(), nullptr, nullptr));
    if (!client.valid()) continue;
    const int yes = 1;
    ::setsockopt(client.fd(), IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
    const std::uint64_t id = sessions_++;
    std::lock_guard lock(threads_mutex_);
    if (stopping_.load()) return;
    if (websocket) {
      threads_.emplace_back([this, s = std::move(client), id]() mutable { serve_websocket(std::move(s), id); });
    } else {
      threads_.emplace_back([this, s = std::move(client), id]() mutable { serve_tcp(std::move(s), id); });
    }
  }
}

std::unique_ptr<Session> EnvironmentServer::make_session(std::uint64_t session_id) const {
  return std::make_unique<Session>(options_.data, options_.env, make_rng(options_.seed, session_id + 1),
                                   options_.policy);
}

void EnvironmentServer::save_transcript(const Session& session, std::uint64_t session_id) const {
  if (options_.transcript_dir.empty() || session.transcript_log().empty()) return;
  std::filesystem::create_directories(options_.transcript_dir);
  const auto path = std::filesystem::path(options_.transcript_dir) /
                    ("session-" + std::to_string(session_id) + ".tsv");
  std::ofstream(path) << session.transcript_log();
}

void EnvironmentServer::serve_tcp(Socket socket, std::uint64_t session_id) {
  auto session = make_session(session_id);
  LineReader reader(socket);
  const int human_timeout_ms = static_cast<int>(options_.human_timeout_s * 1000.0);
  auto waited_ms = 0;
  try {
    while (!stopping_.load() && !session->closed()) {
      std::string line;
      const auto status = reader.read_line(line, kPollSliceMs);
      if (status == LineReader::Status::closed) break;
      if (status == LineReader::Status::timeout) {
        waited_ms = session->awaiting_user() ? waited_ms + kPollSliceMs : 0;
        if (waited_ms >= human_timeout_ms) {
          socket.send_all(session->timeout_message() + "\n");
          waited_ms = 0;
        }
        continue;
      }
      waited_ms = 0;
      socket.send_all(session->handle(line) + "\n");
    }
  } catch (const TransportError&) {
    // client went away; session is discarded
  }
  save_transcript(*session, session_id);
}

namespace {

enum Opcode : std::uint8_t { kContinuation = 0, kText = 1, kClose = 8, kPing = 9, kPong = 10 };

std::string encode_frame(std::uint8_t opcode, std::string_view payload) {
  std::string frame;
  frame.push_back(static_cast<char>(0x80 | opcode));
  const std::size_t n = payload.size();
  if (n < 126) {
    frame.push_back(static_cast<char>(n));
  } else if (n <= 0xFFFF) {
    frame.push_back(126);
    frame.push_back(static_cast<char>(n >> 8));
    frame.push_back(static_cast<char>(n & 0xFF));
  } else {
    frame.push_back(127);
    for (int i = 7; i >= 0; --i) frame.push_back(static_cast<char>((n >> (8 * i)) & 0xFF));
  }
  frame.append(payload);
  return frame;
}

// Reads exactly n bytes from a buffered socket.
class ByteReader {
 public:
  ByteReader(const Socket& s, const std::atomic<bool>& stopping) : socket_(s), stopping_(stopping) {}

  // Returns false on close/stop; timeout_ms applies only to the first byte.
  enum class Status { ok, timeout, closed };
  Status read(std::size_t n, std::string& out, int first_byte_timeout_ms) {
    while (buffer_.size() < n) {
      const int timeout = buffer_.empty() ? first_byte_timeout_ms : -1;
      const Wait w = wait_readable(socket_.fd(), timeout, stopping_);
      if (w == Wait::timeout) return Status::timeout;
      if (w == Wait::stopped) return Status::closed;
      char chunk[4096];
      const ssize_t got = ::recv(socket_.fd(), chunk, sizeof chunk, 0);
      if (got <= 0) return Status::closed;
      buffer_.append(chunk, static_cast<std::size_t>(got));
    }
    out = buffer_.substr(0, n);
    buffer_.erase(0, n);
    return Status::ok;
  }
  std::string& buffer() { return buffer_; }

 private:
  const Socket& socket_;
  const std::atomic<bool>& stopping_;
  std::string buffer_;
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

void EnvironmentServer::serve_websocket(Socket socket, std::uint64_t session_id) {
  ByteReader reader(socket, stopping_);
  // HTTP upgrade request
  std::string request;
  while (request.find("\r\n\r\n") == std::string::npos) {
    std::string byte;
    if (reader.read(1, byte, 10000) != ByteReader::Status::ok || request.size() > 16384) return;
    request += byte;
  }
  std::string key;
  std::size_t pos = 0;
  while (pos < request.size()) {
    const auto end = request.find("\r\n", pos);
    const std::string header = request.substr(pos, end - pos);
    pos = end + 2;
    const auto colon = header.find(':');
    if (colon == std::string::npos) continue;
    if (lower(header.substr(0, colon)) == "sec-websocket-key") {
      key = header.substr(colon + 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(" \r") + 1);
    }
  }
  try {
    if (key.empty()) {
      socket.send_all("HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\n\r\n");
      return;
    }
    socket.send_all("HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                    "Sec-WebSocket-Accept: " + websocket_accept_key(key) + "\r\n\r\n");
  } catch (const TransportError&) {
    return;
  }

  auto session = make_session(session_id);
  const int human_timeout_ms = static_cast<int>(options_.human_timeout_s * 1000.0);
  int waited_ms = 0;
  std::string message;
  try {
    while (!stopping_.load() && !session->closed()) {
      std::string head;
      const auto status = reader.read(2, head, kPollSliceMs);
      if (status == ByteReader::Status::closed) break;
      if (status == ByteReader::Status::timeout) {
        waited_ms = session->awaiting_user() ? waited_ms + kPollSliceMs : 0;
        if (waited_ms >= human_timeout_ms) {
          socket.send_all(encode_frame(kText, session->timeout_message()));
          waited_ms = 0;
        }
        continue;
      }
      waited_ms = 0;
      const bool fin = static_cast<std::uint8_t>(head[0]) & 0x80;
      const std::uint8_t opcode = static_cast<std::uint8_t>(head[0]) & 0x0F;
      const bool masked = static_cast<std::uint8_t>(head[1]) & 0x80;
      std::uint64_t len = static_cast<std::uint8_t>(head[1]) & 0x7F;
      std::string ext;
      if (len == 126) {
        if (reader.read(2, ext, -1) != ByteReader::Status::ok) break;
        len = (static_cast<std::uint64_t>(static_cast<std::uint8_t>(ext[0])) << 8) |
              static_cast<std::uint8_t>(ext[1]);
      } else if (len == 127) {
        if (reader.read(8, ext, -1) != ByteReader::Status::ok) break;
        len = 0;
        for (char c : ext) len = (len << 8) | static_cast<std::uint8_t>(c);
      }
      if (len > kMaxLineBytes) break;
      std::string mask;
      if (masked && reader.read(4, mask, -1) != ByteReader::Status::ok) break;
      std::string payload;
      if (len > 0 && reader.read(static_cast<std::size_t>(len), payload, -1) != ByteReader::Status::ok) break;
      if (masked) {
        for (std::size_t i = 0; i < payload.size(); ++i) payload[i] ^= mask[i % 4];
      }

      if (opcode == kClose) {
        socket.send_all(encode_frame(kClose, ""));
        break;
      }
      if (opcode == kPing) {
        socket.send_all(encode_frame(kPong, payload));
        continue;
      }
      if (opcode == kPong) continue;
      if (opcode == kText || opcode == kContinuation) {
        message += payload;
        if (!fin) continue;
        socket.send_all(encode_frame(kText, session->handle(message)));
        message.clear();
      }
    }
  } catch (const TransportError&) {
  }
  save_transcript(*session, session_id);
}

TcpEnvironment::TcpEnvironment(const std::string& host, int port, SessionMode mode, int timeout_ms)
    : socket_(connect_tcp(host, port)), reader_(socket_), timeout_ms_(timeout_ms) {
  handshake(mode);
}

std::string TcpEnvironment::exchange(const std::string& line) {
  socket_.send_all(line + "\n");
  std::string reply;
  switch (reader_.read_line(reply, timeout_ms_)) {
    case LineReader::Status::line: return reply;
    case LineReader::Status::timeout: throw TransportError("timed out waiting for the server");
    case LineReader::Status::closed: break;
  }
  throw TransportError("server closed the connection");
}

}  // namespace simpleds
