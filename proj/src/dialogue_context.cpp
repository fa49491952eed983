#include "simpleds/dialogue_context.hpp"

namespace simpleds {

SlotSet DialogueContext::filled_slots() const {
  SlotSet set;
  for (Slot s : kSlots) {
    if (filled(s)) set.insert(s);
  }
  return set;
}

SlotSet DialogueContext::confirmed_slots() const {
  SlotSet set;
  for (Slot s : kSlots) {
    if (confirmed(s)) set.insert(s);
  }
  return set;
}

Bindings DialogueContext::bindings() const {
  Bindings b;
  for (Slot s : kSlots) {
    if (filled(s)) b.emplace(std::string(slot_name(s)), slot(s)->value);
  }
  if (retrieved) {
    b.emplace("name", retrieved->name);
    b.emplace("location", retrieved->location);
  }
  return b;
}

void DialogueContext::clear_task() {
  for (auto& s : slots) s.reset();
  lookup_done = false;
  retrieved.reset();
  info_provided = false;
  user_declined_more = false;
}

}  // namespace simpleds
