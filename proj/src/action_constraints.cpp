#include "simpleds/action_constraints.hpp"

#include <algorithm>

namespace simpleds {

namespace {

bool all_of_slots(SlotSet slots, auto&& pred) {
  for (Slot s : slots.slots()) {
    if (!pred(s)) return false;
  }
  return true;
}

}  // namespace

std::vector<int> legitimate_actions(const DialogueContext& c, const ConstraintConfig& config) {
  std::vector<int> out;
  const auto unfilled = [&](Slot s) { return !c.filled(s); };
  const auto confirmable = [&](Slot s) { return c.filled(s) && !c.confirmed(s); };
  const auto doubtful = [&](Slot s) {
    return confirmable(s) && c.slot(s)->confidence < config.apology_threshold;
  };
  const bool all_confirmed = c.confirmed_slots() == SlotSet::all();

  for (int a = 0; a < static_cast<int>(kNumActions); ++a) {
    const DialogueAct& act = act_at(a);
    const SlotSet slots = act.slots();
    bool ok = false;
    switch (act.type) {
      case ActType::Salutation:
        ok = a == acts::kGreeting ? c.turn == 0 : c.user_declined_more;
        break;
      case ActType::Request:
        // hmihy asks for everything at once
        ok = all_of_slots(slots.empty() ? SlotSet::all() : slots, unfilled);
        break;
      case ActType::Apology:
        ok = all_of_slots(slots, doubtful);
        break;
      case ActType::ExpConfirm:
      case ActType::ImpConfirm:
        ok = all_of_slots(slots, confirmable);
        break;
      case ActType::Retrieve:
        ok = all_confirmed && !c.lookup_done;
        break;
      case ActType::Provide:
        ok = c.lookup_done && !c.info_provided &&
             (a == acts::kProvideKnown) == c.retrieved.has_value();
        break;
      case ActType::AskFor:
        ok = c.info_provided && !c.user_declined_more;
        break;
    }
    // a user who wants nothing more only gets a goodbye
    if (c.user_declined_more && act.type != ActType::Salutation) ok = false;
    if (ok) out.push_back(a);
  }
  return out;
}

std::vector<int> probable_actions(std::span<const double> posterior, double threshold) {
  std::vector<int> out;
  for (std::size_t a = 0; a < posterior.size(); ++a) {
    if (posterior[a] > threshold) out.push_back(static_cast<int>(a));
  }
  return out;
}

ConstrainedSet constrained_set(std::span<const double> posterior, const DialogueContext& context,
                               const ConstraintConfig& config) {
  std::vector<int> probable = probable_actions(posterior, config.probability_threshold);
  std::vector<int> legit = legitimate_actions(context, config);
  ConstrainedSet out;
  std::ranges::set_union(probable, legit, std::back_inserter(out.actions));
  if (out.actions.empty()) {
    out.anomaly = true;
    for (int a = 0; a < static_cast<int>(kNumActions); ++a) out.actions.push_back(a);
  }
  return out;
}

ConstrainedSet constrained_set(const NaiveBayesModel& model, std::span<const double> state,
                               const DialogueContext& context, const ConstraintConfig& config) {
  return constrained_set(model.posterior(state), context, config);
}

}  // namespace simpleds
