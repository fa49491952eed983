#include "simpleds/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "simpleds/errors.hpp"

namespace simpleds {

void Config::validate() const {
  learner.validate();
  env.validate();
  if (server.port < 0 || server.port > 65535 || server.ws_port < 0 || server.ws_port > 65535) {
    throw ContractError("ports must be in [0,65535]");
  }
  if (!(server.human_timeout_s > 0.0)) throw ContractError("human timeout must be positive");
}

namespace {

// Reads the keys present in `section` into their fields, rejecting unknown keys.
class SectionReader {
 public:
  SectionReader(const nlohmann::json& root, const char* name, const std::string& source)
      : source_(source), name_(name) {
    if (root.contains(name)) {
      section_ = &root.at(name);
      if (!section_->is_object()) fail("section must be an object");
    }
  }

  template <typename T>
  SectionReader& read(const char* key, T& field) {
    if (!section_) return *this;
    seen_.push_back(key);
    if (!section_->contains(key)) return *this;
    try {
      field = section_->at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(std::string(key) + ": " + e.what());
    }
    return *this;
  }

  void finish() const {
    if (!section_) return;
    for (const auto& [key, value] : section_->items()) {
      if (std::ranges::find(seen_, key) == seen_.end()) fail("unknown key '" + key + "'");
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source_, 0, "[" + name_ + "] " + what);
  }

  std::string source_;
  std::string name_;
  const nlohmann::json* section_ = nullptr;
  std::vector<std::string> seen_;
};

}  // namespace

Config config_from_json(const nlohmann::json& j, const std::string& source_name) {
  if (!j.is_object()) throw DataError(source_name, 0, "configuration must be a JSON object");
  static const std::vector<std::string> kSections = {"seed",      "learner",     "reward",
                                                     "constraints", "noise",     "simulator",
                                                     "environment", "server",    "data"};
  for (const auto& [key, value] : j.items()) {
    if (std::ranges::find(kSections, key) == kSections.end()) {
      throw DataError(source_name, 0, "unknown section '" + key + "'");
    }
  }
  Config c;
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();

  auto& hp = c.learner;
  SectionReader(j, "learner", source_name)
      .read("replay_capacity", hp.replay_capacity)
      .read("gamma", hp.gamma)
      .read("epsilon_start", hp.epsilon_start)
      .read("epsilon_min", hp.epsilon_min)
      .read("epsilon_anneal_steps", hp.epsilon_anneal_steps)
      .read("batch_size", hp.batch_size)
      .read("learning_steps", hp.total_learning_steps)
      .read("max_episodes", hp.max_episodes)
      .read("target_sync_period", hp.target_sync_period)
      .read("learning_rate", hp.learning_rate)
      .read("replay_warmup", hp.replay_warmup)
      .finish();
  SectionReader(j, "reward", source_name)
      .read("w", c.env.reward.w)
      .read("dl", c.env.reward.dl)
      .read("slots_to_confirm", c.env.reward.slots_to_confirm)
      .finish();
  SectionReader(j, "constraints", source_name)
      .read("probability_threshold", c.env.constraints.probability_threshold)
      .read("apology_threshold", c.env.constraints.apology_threshold)
      .read("binarisation_threshold", c.env.constraints.binarisation_threshold)
      .finish();
  SectionReader(j, "noise", source_name)
      .read("enabled", c.env.noise.enabled)
      .read("distortion_threshold", c.env.noise.distortion_threshold)
      .read("human_confidence", c.env.human_confidence)
      .finish();
  SectionReader(j, "simulator", source_name).read("p_end", c.env.simulator.p_end).finish();
  SectionReader(j, "environment", source_name).read("max_turns", c.env.max_turns).finish();
  SectionReader(j, "server", source_name)
      .read("port", c.server.port)
      .read("ws_port", c.server.ws_port)
      .read("human_timeout_s", c.server.human_timeout_s)
      .read("transcript_dir", c.server.transcript_dir)
      .finish();
  SectionReader(j, "data", source_name).read("dir", c.data.dir).read("lang", c.data.lang).finish();

  try {
    c.validate();
  } catch (const ContractError& e) {
    throw DataError(source_name, 0, e.what());
  }
  return c;
}

nlohmann::json config_to_json(const Config& c) {
  const auto& hp = c.learner;
  return {
      {"seed", c.seed},
      {"learner",
       {{"replay_capacity", hp.replay_capacity},
        {"gamma", hp.gamma},
        {"epsilon_start", hp.epsilon_start},
        {"epsilon_min", hp.epsilon_min},
        {"epsilon_anneal_steps", hp.epsilon_anneal_steps},
        {"batch_size", hp.batch_size},
        {"learning_steps", hp.total_learning_steps},
        {"max_episodes", hp.max_episodes},
        {"target_sync_period", hp.target_sync_period},
        {"learning_rate", hp.learning_rate},
        {"replay_warmup", hp.replay_warmup}}},
      {"reward",
       {{"w", c.env.reward.w}, {"dl", c.env.reward.dl}, {"slots_to_confirm", c.env.reward.slots_to_confirm}}},
      {"constraints",
       {{"probability_threshold", c.env.constraints.probability_threshold},
        {"apology_threshold", c.env.constraints.apology_threshold},
        {"binarisation_threshold", c.env.constraints.binarisation_threshold}}},
      {"noise",
       {{"enabled", c.env.noise.enabled},
        {"distortion_threshold", c.env.noise.distortion_threshold},
        {"human_confidence", c.env.human_confidence}}},
      {"simulator", {{"p_end", c.env.simulator.p_end}}},
      {"environment", {{"max_turns", c.env.max_turns}}},
      {"server",
       {{"port", c.server.port},
        {"ws_port", c.server.ws_port},
        {"human_timeout_s", c.server.human_timeout_s},
        {"transcript_dir", c.server.transcript_dir}}},
      {"data", {{"dir", c.data.dir}, {"lang", c.data.lang}}},
  };
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open configuration");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw DataError(path, line, e.what());
  }
  return config_from_json(j, path);
}

}  // namespace simpleds
