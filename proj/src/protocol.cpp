#include "simpleds/protocol.hpp"

#include <algorithm>

#include "simpleds/dqn.hpp"

namespace simpleds {

using nlohmann::json;

json error_message(std::optional<std::int64_t> id, std::string_view reason, std::string_view message) {
  json j = {{"type", "error"}, {"reason", reason}, {"message", message}};
  j["id"] = id ? json(*id) : json(nullptr);
  return j;
}

json observation_to_json(const Observation& obs) {
  json valid = json::array();
  for (int a : obs.valid_actions) valid.push_back(act_name(a));
  return {{"type", "observation"},
          {"state", obs.state},
          {"reward", obs.reward},
          {"terminal", obs.terminal},
          {"valid_actions", std::move(valid)},
          {"system_text", obs.system_text},
          {"user_text", obs.user_text}};
}

Observation observation_from_json(const json& j) {
  Observation obs;
  try {
    obs.state = j.at("state").get<std::vector<double>>();
    obs.reward = j.at("reward").get<double>();
    obs.terminal = j.at("terminal").get<bool>();
    for (const auto& name : j.at("valid_actions")) {
      const auto index = act_index(name.get<std::string>());
      if (!index) throw TransportError("observation names unknown action " + name.dump());
      obs.valid_actions.push_back(*index);
    }
    obs.system_text = j.value("system_text", "");
    obs.user_text = j.value("user_text", "");
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed observation: ") + e.what());
  }
  return obs;
}

Session::Session(std::shared_ptr<const DataPack> data, EnvironmentConfig config, Rng rng,
                 std::shared_ptr<const QNetwork> policy)
    : data_(data), policy_(std::move(policy)), env_(std::move(data), std::move(config), std::move(rng)) {
  if (policy_ && policy_->input_width() != data_->vocab.size()) {
    throw DimensionError("session policy input", data_->vocab.size(), policy_->input_width());
  }
}

bool Session::awaiting_user() const { return mode_ == SessionMode::interactive && env_.turn_pending(); }

std::string Session::handle(std::string_view line) {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::parse_error& e) {
    return error_message(std::nullopt, "parse", e.what()).dump();
  }
  if (!request.is_object()) return error_message(std::nullopt, "parse", "expected a JSON object").dump();
  if (!request.contains("id") || !request.at("id").is_number_integer()) {
    return error_message(std::nullopt, "protocol", "missing integer id").dump();
  }
  const auto id = request.at("id").get<std::int64_t>();
  if (id <= last_id_) {
    return error_message(id, "id", "request ids must strictly increase").dump();
  }
  last_id_ = id;
  if (closed_) return error_message(id, "closed", "session closed").dump();

  json reply;
  try {
    reply = dispatch(request, id);
  } catch (const EpisodeError& e) {
    reply = error_message(id, e.reason(), e.what());
  } catch (const json::exception& e) {
    reply = error_message(id, "protocol", e.what());
  } catch (const ContractError& e) {
    reply = error_message(id, "invalid", e.what());
  }
  note_if_finished();
  return reply.dump();
}

json Session::dispatch(const json& request, std::int64_t id) {
  const auto type = request.at("type").get<std::string>();
  if (type == "hello") {
    const auto mode = request.value("mode", "simulated");
    if (mode == "simulated") {
      mode_ = SessionMode::simulated;
    } else if (mode == "interactive") {
      mode_ = SessionMode::interactive;
    } else {
      throw EpisodeError("protocol", "unknown mode '" + mode + "'");
    }
    server_driven_ = mode_ == SessionMode::interactive && policy_ != nullptr;
    json actions = json::array();
    for (std::size_t a = 0; a < kNumActions; ++a) actions.push_back(act_name(static_cast<int>(a)));
    return {{"id", id},
            {"type", "hello"},
            {"protocol", kProtocolVersion},
            {"mode", mode},
            {"driver", server_driven_ ? "server" : "client"},
            {"lang", data_->lang},
            {"actions", std::move(actions)},
            {"vocabulary", data_->vocab.words()}};
  }
  if (type == "reset") {
    std::optional<UserGoal> goal;
    if (request.contains("goal")) {
      const auto& g = request.at("goal");
      goal = UserGoal{g.at("food").get<std::string>(), g.at("price").get<std::string>(),
                      g.at("area").get<std::string>()};
      for (Slot s : kSlots) {
        const auto& values = data_->db.values(s);
        if (std::ranges::find(values, goal->value(s)) == values.end()) {
          throw EpisodeError("invalid_goal", "unknown " + std::string(slot_name(s)) + " '" + goal->value(s) + "'");
        }
      }
    }
    const Observation obs = env_.reset(std::move(goal));
    logged_ = false;
    if (server_driven_) return drive(id);
    return observation_reply(id, obs);
  }
  if (type == "action") {
    if (server_driven_) throw EpisodeError("protocol", "the server selects actions in this session");
    const auto& field = request.at("action");
    std::optional<int> action;
    if (field.is_string()) {
      action = act_index(field.get<std::string>());
    } else if (field.is_number_integer()) {
      action = field.get<int>();
    }
    if (!action || *action < 0 || *action >= static_cast<int>(kNumActions)) {
      throw EpisodeError("invalid_action", "unknown action " + field.dump());
    }
    if (mode_ == SessionMode::simulated) return observation_reply(id, env_.step(*action));
    const PendingTurn turn = env_.begin_turn(*action);
    if (turn.expects_user) {
      return {{"id", id},
              {"type", "prompt"},
              {"action", act_name(*action)},
              {"system_text", join(turn.system_words)}};
    }
    return observation_reply(id, env_.finish_turn({}));
  }
  if (type == "user_text") {
    if (mode_ != SessionMode::interactive) throw EpisodeError("protocol", "user_text requires interactive mode");
    if (!env_.turn_pending()) throw EpisodeError("not_awaiting", "no user turn is expected now");
    const Observation obs = env_.finish_turn_with_text(request.at("text").get<std::string>());
    if (server_driven_) return drive(id);
    return observation_reply(id, obs);
  }
  if (type == "bye") {
    closed_ = true;
    return {{"id", id}, {"type", "bye"}};
  }
  throw EpisodeError("protocol", "unknown message type '" + type + "'");
}

json Session::observation_reply(std::int64_t id, const Observation& obs) const {
  json j = observation_to_json(obs);
  j["id"] = id;
  return j;
}

json Session::drive(std::int64_t id) {
  json turns = json::array();
  bool awaiting = false;
  while (!env_.terminal()) {
    const int action = greedy_action(*policy_, env_.state(), env_.valid_actions());
    const PendingTurn turn = env_.begin_turn(action);
    json entry = {{"action", act_name(action)}, {"system_text", join(turn.system_words)}};
    if (turn.expects_user) {
      turns.push_back(std::move(entry));
      awaiting = true;
      break;
    }
    const Observation obs = env_.finish_turn({});
    entry["reward"] = obs.reward;
    turns.push_back(std::move(entry));
  }
  json reply = observation_reply(id, env_.observation());
  if (!turns.empty()) reply["system_text"] = turns.back().at("system_text");
  reply["turns"] = std::move(turns);
  reply["awaiting_user"] = awaiting;
  return reply;
}

void Session::note_if_finished() {
  if (logged_ || !env_.started() || !env_.terminal()) return;
  transcript_log_ += format_transcript(env_.transcript(), env_.state());
  transcript_log_ += '\n';
  logged_ = true;
}

std::string Session::timeout_message() {
  env_.abort();
  note_if_finished();
  json j = error_message(std::nullopt, "timeout", "no user input before the timeout; episode aborted");
  j["terminal"] = true;
  return j.dump();
}

json ProtocolClient::request(json message) {
  const std::int64_t id = next_id_++;
  message["id"] = id;
  const std::string line = exchange(message.dump());
  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::parse_error& e) {
    throw TransportError(std::string("unparseable reply: ") + e.what());
  }
  if (!reply.is_object() || !reply.contains("id") || reply.at("id") != json(id)) {
    throw TransportError("reply does not echo request id " + std::to_string(id));
  }
  return reply;
}

void ProtocolClient::handshake(SessionMode mode) {
  const json reply = request({{"type", "hello"}, {"mode", mode == SessionMode::simulated ? "simulated" : "interactive"}});
  if (reply.value("type", "") != "hello") throw TransportError("handshake rejected: " + reply.dump());
  vocabulary_ = reply.at("vocabulary").get<std::vector<std::string>>();
  actions_ = reply.at("actions").get<std::vector<std::string>>();
  for (std::size_t a = 0; a < actions_.size(); ++a) {
    if (a >= kNumActions || actions_[a] != act_name(static_cast<int>(a))) {
      throw TransportError("server action catalog differs from the client's");
    }
  }
}

Observation ProtocolClient::expect_observation(const json& reply) {
  const auto type = reply.value("type", "");
  if (type == "error") {
    throw EpisodeError(reply.value("reason", "error"), reply.value("message", ""));
  }
  if (type != "observation") throw TransportError("expected an observation, got " + reply.dump());
  return observation_from_json(reply);
}

Observation ProtocolClient::reset() { return expect_observation(request({{"type", "reset"}})); }

Observation ProtocolClient::reset_with_goal(const UserGoal& goal) {
  return expect_observation(request(
      {{"type", "reset"}, {"goal", {{"food", goal.food}, {"price", goal.price}, {"area", goal.area}}}}));
}

Observation ProtocolClient::step(int action) {
  return expect_observation(request({{"type", "action"}, {"action", act_name(action)}}));
}

void ProtocolClient::bye() { request({{"type", "bye"}}); }

LoopbackEnvironment::LoopbackEnvironment(std::shared_ptr<const DataPack> data, EnvironmentConfig config,
                                         Rng rng, SessionMode mode)
    : session_(std::move(data), std::move(config), std::move(rng)) {
  handshake(mode);
}

}  // namespace simpleds
