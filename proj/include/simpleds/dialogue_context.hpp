#pragma once

#include <array>
#include <optional>
#include <string>

#include "simpleds/dialogue_act.hpp"
#include "simpleds/restaurant_db.hpp"
#include "simpleds/templates.hpp"
#include "simpleds/text.hpp"

namespace simpleds {

struct SlotFill {
  std::string value;
  double confidence = 0.0;  // mean confidence of the words the value came from
  bool confirmed = false;

  bool operator==(const SlotFill&) const = default;
};

// Environment-side bookkeeping behind the word-feature state.
struct DialogueContext {
  std::array<std::optional<SlotFill>, 3> slots;
  int turn = 0;  // system actions executed this episode
  Tokens last_system;
  ScoredUtterance last_user;
  bool lookup_done = false;
  std::optional<Restaurant> retrieved;
  bool info_provided = false;
  bool user_declined_more = false;
  bool closed = false;
  bool terminal = false;

  const std::optional<SlotFill>& slot(Slot s) const { return slots[static_cast<std::size_t>(s)]; }
  std::optional<SlotFill>& slot(Slot s) { return slots[static_cast<std::size_t>(s)]; }
  bool filled(Slot s) const { return slot(s).has_value(); }
  bool confirmed(Slot s) const { return filled(s) && slot(s)->confirmed; }
  SlotSet filled_slots() const;
  SlotSet confirmed_slots() const;

  // Slot values plus {name} and {location} of the retrieved restaurant.
  Bindings bindings() const;

  // Starts a new task within the episode: slots, lookup and provision cleared.
  void clear_task();

  bool operator==(const DialogueContext&) const = default;
};

}  // namespace simpleds
