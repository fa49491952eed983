#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "simpleds/environment.hpp"
#include "simpleds/observation.hpp"
#include "simpleds/qnetwork.hpp"

namespace simpleds {

// Newline-delimited JSON messages, one object per line:
//   {"id":0,"type":"hello","mode":"simulated"|"interactive"}
//   {"id":N,"type":"reset"[,"goal":{"food":..,"price":..,"area":..}]}
//   {"id":N,"type":"action","action":"ImpConfirm(food,price,area)"}
//   {"id":N,"type":"user_text","text":"..."}          (interactive only)
//   {"id":N,"type":"bye"}
// Replies echo the request id: hello, observation, prompt, bye or error.
inline constexpr std::string_view kProtocolVersion = "SIMPLEDS/1";

enum class SessionMode { simulated, interactive };

// Server side of one client connection. Transport-agnostic: feed it request
// lines and send back the reply it returns. Every request gets exactly one
// reply; malformed input yields an "error" reply and the session stays usable.
//
// In interactive mode with a policy, the server selects actions itself and
// pauses whenever the user has to speak; otherwise the client sends actions
// and, for acts expecting an answer, receives a "prompt" followed by its
// user_text being turned into the observation.
class Session {
 public:
  Session(std::shared_ptr<const DataPack> data, EnvironmentConfig config, Rng rng,
          std::shared_ptr<const QNetwork> policy = nullptr);

  std::string handle(std::string_view line);

  bool awaiting_user() const;
  // Aborts the episode of a silent human; returns the unsolicited error message.
  std::string timeout_message();

  bool closed() const { return closed_; }
  SessionMode mode() const { return mode_; }
  const DialogueEnvironment& environment() const { return env_; }
  // Transcripts of every finished episode, in order.
  const std::string& transcript_log() const { return transcript_log_; }

 private:
  nlohmann::json dispatch(const nlohmann::json& request, std::int64_t id);
  nlohmann::json observation_reply(std::int64_t id, const Observation& obs) const;
  nlohmann::json drive(std::int64_t id);
  void note_if_finished();

  std::shared_ptr<const DataPack> data_;
  std::shared_ptr<const QNetwork> policy_;
  DialogueEnvironment env_;
  SessionMode mode_ = SessionMode::simulated;
  std::int64_t last_id_ = -1;
  bool closed_ = false;
  bool server_driven_ = false;
  bool logged_ = false;
  std::string transcript_log_;
};

nlohmann::json error_message(std::optional<std::int64_t> id, std::string_view reason, std::string_view message);

Observation observation_from_json(const nlohmann::json& j);
nlohmann::json observation_to_json(const Observation& obs);

// Client half of the protocol over some line exchange.
class ProtocolClient : public EnvironmentClient {
 public:
  std::size_t state_size() const override { return vocabulary_.size(); }
  std::vector<std::string> vocabulary() const override { return vocabulary_; }
  const std::vector<std::string>& actions() const { return actions_; }

  Observation reset() override;
  Observation reset_with_goal(const UserGoal& goal);
  Observation step(int action) override;
  // Raw request/reply, the id is filled in.
  nlohmann::json request(nlohmann::json message);
  void bye();

 protected:
  void handshake(SessionMode mode);
  // One request line out, one reply line back. Throws TransportError.
  virtual std::string exchange(const std::string& line) = 0;

 private:
  Observation expect_observation(const nlohmann::json& reply);

  std::int64_t next_id_ = 0;
  std::vector<std::string> vocabulary_;
  std::vector<std::string> actions_;
};

// Runs the protocol against an in-process Session.
class LoopbackEnvironment final : public ProtocolClient {
 public:
  LoopbackEnvironment(std::shared_ptr<const DataPack> data, EnvironmentConfig config, Rng rng,
                      SessionMode mode = SessionMode::simulated);
  Session& session() { return session_; }

 protected:
  std::string exchange(const std::string& line) override { return session_.handle(line); }

 private:
  Session session_;
};

}  // namespace simpleds
