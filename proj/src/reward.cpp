#include "simpleds/reward.hpp"

#include <algorithm>
#include <string>

#include "simpleds/errors.hpp"

namespace simpleds {

void RewardConfig::validate() const {
  if (!(w >= 0.0 && w <= 1.0)) throw ContractError("reward weight w must be in [0,1]");
  if (!(dl >= 0.0)) throw ContractError("reward length penalty DL must be >= 0");
  if (slots_to_confirm < 1) throw ContractError("slots_to_confirm must be >= 1");
}

double confirmation_ratio(const DialogueContext& context, const RewardConfig& config) {
  const double confirmed = context.confirmed_slots().size();
  return std::min(1.0, confirmed / static_cast<double>(config.slots_to_confirm));
}

double compute_reward(const DialogueContext& context_after, int action, double dr,
                      const RewardConfig& config) {
  act_at(action);
  if (!(dr > 0.0 && dr <= 1.0)) {
    throw ContractError("data-likeness " + std::to_string(dr) + " outside (0,1]");
  }
  const double cr = confirmation_ratio(context_after, config);
  return cr * config.w + dr * (1.0 - config.w) - config.dl;
}

}  // namespace simpleds
