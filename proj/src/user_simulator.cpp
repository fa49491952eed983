#include "simpleds/user_simulator.hpp"

#include <algorithm>

#include "simpleds/errors.hpp"

namespace simpleds {

namespace {

std::size_t slot_bits(SlotSet slots) {
  std::size_t bits = 0;
  for (Slot s : slots.slots()) bits |= 1u << static_cast<int>(s);
  return bits;
}

}  // namespace

const std::string& UserGoal::value(Slot slot) const {
  switch (slot) {
    case Slot::food: return food;
    case Slot::price: return price;
    case Slot::area: return area;
  }
  return food;
}

Bindings UserGoal::bindings() const {
  return {{"food", food}, {"price", price}, {"area", area}};
}

UserGoal sample_goal(const RestaurantDb& db, Rng& rng) {
  UserGoal goal;
  for (Slot s : kSlots) {
    const auto& values = db.values(s);
    if (values.empty()) throw ContractError("restaurant DB has no values for " + std::string(slot_name(s)));
    const std::string& v = values[uniform_index(rng, values.size())];
    switch (s) {
      case Slot::food: goal.food = v; break;
      case Slot::price: goal.price = v; break;
      case Slot::area: goal.area = v; break;
    }
  }
  return goal;
}

void NoiseConfig::validate() const {
  if (!(distortion_threshold >= 0.0 && distortion_threshold <= 1.0)) {
    throw ContractError("distortion threshold must be in [0,1]");
  }
}

SimulatorRules SimulatorRules::from_file(const KeyedTextFile& file, const std::string& source_name) {
  SimulatorRules rules;
  std::array<bool, 8> have{};
  bool have_hmihy = false;
  for (const auto& e : file.entries) {
    if (e.key == "Confirm.yes") {
      rules.affirm_ = e.text;
    } else if (e.key == "Confirm.no") {
      rules.negate_ = e.text;
    } else if (e.key == "AskFor.decline") {
      rules.decline_ = e.text;
    } else if (auto act = parse_act(e.key); act && act->type == ActType::Request) {
      if (act->slots().empty()) {
        rules.hmihy_ = e.text;
        have_hmihy = true;
      } else {
        const auto bits = slot_bits(act->slots());
        rules.by_slots_[bits] = e.text;
        have[bits] = true;
      }
    } else {
      throw DataError(source_name, e.line, "unknown simulator rule key '" + e.key + "'");
    }
  }
  for (std::size_t bits = 1; bits < 8; ++bits) {
    if (!have[bits]) throw DataError(source_name, 0, "missing answer rule for a Request slot combination");
  }
  if (!have_hmihy) throw DataError(source_name, 0, "missing Request(hmihy) rule");
  if (rules.affirm_.empty() || rules.negate_.empty() || rules.decline_.empty()) {
    throw DataError(source_name, 0, "missing Confirm.yes, Confirm.no or AskFor.decline rule");
  }
  return rules;
}

const std::string& SimulatorRules::answer(SlotSet slots) const {
  if (slots.empty()) return hmihy_;
  return by_slots_[slot_bits(slots)];
}

std::vector<std::string> SimulatorRules::all_texts() const {
  std::vector<std::string> out = {hmihy_, affirm_, negate_, decline_};
  for (std::size_t bits = 1; bits < 8; ++bits) out.push_back(by_slots_[bits]);
  return out;
}

UserResponse respond(const SimulatorRules& rules, const UserGoal& goal, int action,
                     const Bindings& system_values, const SimulatorConfig& config,
                     const RestaurantDb& db, Rng& rng) {
  const DialogueAct& act = act_at(action);
  UserResponse out;
  switch (act.type) {
    case ActType::Request:
    case ActType::Apology:
      out.words = fill_template(rules.answer(act.slots()), goal.bindings());
      break;
    case ActType::ExpConfirm: {
      SlotSet wrong;
      for (Slot s : act.slots().slots()) {
        const auto it = system_values.find(slot_name(s));
        if (it == system_values.end() || it->second != goal.value(s)) wrong.insert(s);
      }
      if (wrong.empty()) {
        out.words = tokenize(rules.affirm());
      } else {
        out.words = tokenize(rules.negate());
        auto correction = fill_template(rules.answer(wrong), goal.bindings());
        out.words.insert(out.words.end(), correction.begin(), correction.end());
      }
      break;
    }
    case ActType::AskFor:
      if (uniform01(rng) < config.p_end) {
        out.words = tokenize(rules.decline());
      } else {
        UserGoal next = sample_goal(db, rng);
        out.words = fill_template(rules.answer(SlotSet{}), next.bindings());
        out.new_goal = std::move(next);
      }
      break;
    default:
      break;
  }
  return out;
}

ScoredUtterance distort(const Tokens& words, const NoiseConfig& noise, const Vocabulary& vocab, Rng& rng) {
  ScoredUtterance out;
  out.words.reserve(words.size());
  out.scores.reserve(words.size());
  for (const auto& word : words) {
    const double score = uniform01(rng);
    std::string emitted = word;
    if (noise.enabled && score < noise.distortion_threshold) {
      const auto own = vocab.index_of(word);
      const std::size_t candidates = vocab.size() - (own ? 1 : 0);
      if (candidates > 0) {
        std::size_t pick = uniform_index(rng, candidates);
        if (own && pick >= *own) ++pick;
        emitted = vocab.word(pick);
      }
    }
    out.words.push_back(std::move(emitted));
    out.scores.push_back(score);
  }
  return out;
}

ScoredUtterance score_uniformly(const Tokens& words, double confidence) {
  return ScoredUtterance{words, std::vector<double>(words.size(), confidence)};
}

}  // namespace simpleds
