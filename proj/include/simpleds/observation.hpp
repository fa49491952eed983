#pragma once

#include <string>
#include <vector>

namespace simpleds {

// What the learning client sees after reset or after each system action.
struct Observation {
  std::vector<double> state;
  double reward = 0.0;
  bool terminal = false;
  std::vector<int> valid_actions;
  std::string system_text;
  std::string user_text;

  bool operator==(const Observation&) const = default;
};

// Client side of the environment: an in-process environment, a loopback
// through the wire protocol, or a TCP connection to a server.
class EnvironmentClient {
 public:
  virtual ~EnvironmentClient() = default;
  virtual std::size_t state_size() const = 0;
  virtual std::vector<std::string> vocabulary() const = 0;
  virtual Observation reset() = 0;
  virtual Observation step(int action) = 0;
};

}  // namespace simpleds
