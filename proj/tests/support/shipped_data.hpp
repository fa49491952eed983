#pragma once

#include <memory>
#include <string>
#include <vector>

#include "simpleds/data_pack.hpp"
#include "simpleds/dialogue_act.hpp"
#include "simpleds/environment.hpp"

namespace simpleds::fixtures {

// The English data pack from the source tree, loaded once per process.
inline std::shared_ptr<const DataPack> shipped_data() {
  static const auto pack = std::make_shared<const DataPack>(
      load_data_pack(DataPaths::in_directory(SIMPLEDS_DATA_DIR, "en")));
  return pack;
}

inline EnvironmentConfig quiet_config() {
  EnvironmentConfig cfg;
  cfg.noise.enabled = false;
  return cfg;
}

inline const UserGoal& example_goal() {
  static const UserGoal goal{"mexican", "reasonably priced", "east"};
  return goal;
}

inline std::vector<int> example_actions() {
  std::vector<int> out;
  for (const char* name : {"Salutation(greeting)", "Request(food,price,area)", "ImpConfirm(food,price,area)",
                           "Retrieve(info)", "Provide(known)", "AskFor(more)", "Salutation(closing)"}) {
    out.push_back(*act_index(name));
  }
  return out;
}

// Expected system turns; the restaurant is the shipped one matching the goal.
inline std::vector<std::string> example_verbalisations() {
  return {"Hello!",
          "What type of food, price range, and area are you looking for?",
          "Okay, reasonably priced mexican food in the east.",
          "Let me see.",
          "Restaurant taco house is an excellent choice. It is located in market street.",
          "Anything else?",
          "Okay, talk to you soon. Bye!"};
}

}  // namespace simpleds::fixtures
