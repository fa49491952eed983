#pragma once

#include "simpleds/dialogue_context.hpp"

namespace simpleds {

struct RewardConfig {
  double w = 0.5;   // weight of the confirmation term
  double dl = 0.1;  // per-turn length penalty
  int slots_to_confirm = 3;

  void validate() const;
};

// Positively confirmed slots / slots to confirm, capped at 1.
double confirmation_ratio(const DialogueContext& context, const RewardConfig& config);

// R(s,a,s') = CR*w + DR*(1-w) - DL with CR read from the post-action context
// and dr the data-likeness Pr(a|s) of the executed action at the pre-action
// state. Throws ContractError when dr is outside (0,1].
double compute_reward(const DialogueContext& context_after, int action, double dr,
                      const RewardConfig& config);

}  // namespace simpleds
