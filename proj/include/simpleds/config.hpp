#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "simpleds/dqn.hpp"
#include "simpleds/environment.hpp"

namespace simpleds {

struct ServerConfig {
  int port = 7777;
  int ws_port = 7778;  // browser chat; 0 disables
  double human_timeout_s = 120.0;
  std::string transcript_dir;  // empty: no transcript files
};

struct DataConfig {
  std::string dir = "data";
  std::string lang = "en";
};

struct Config {
  std::uint64_t seed = 1;
  HyperParams learner;
  EnvironmentConfig env;
  ServerConfig server;
  DataConfig data;

  void validate() const;
};

// Sections: seed, learner, reward, constraints, noise, simulator,
// environment, server, data. Missing keys keep their defaults; unknown keys
// are rejected.
Config config_from_json(const nlohmann::json& j, const std::string& source_name);
nlohmann::json config_to_json(const Config& config);
// Throws DataError with file and line on syntax errors.
Config load_config(const std::string& path);

}  // namespace simpleds
