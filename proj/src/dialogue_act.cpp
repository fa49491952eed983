#include "simpleds/dialogue_act.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "simpleds/errors.hpp"

namespace simpleds {

namespace {

constexpr std::array<std::string_view, 8> kTypeNames = {
    "Salutation", "Request", "AskFor", "Apology", "ExpConfirm", "ImpConfirm", "Retrieve", "Provide"};
constexpr std::array<std::string_view, 10> kArgNames = {
    "greeting", "closing", "hmihy", "more", "info", "known", "unknown", "food", "price", "area"};

// The seven non-empty slot combinations in catalog order.
const std::array<std::vector<ActArg>, 7> kSlotCombos = {{
    {ActArg::food},
    {ActArg::price},
    {ActArg::area},
    {ActArg::food, ActArg::price},
    {ActArg::food, ActArg::area},
    {ActArg::price, ActArg::area},
    {ActArg::food, ActArg::price, ActArg::area},
}};

std::array<DialogueAct, kNumActions> build_catalog() {
  std::vector<DialogueAct> acts;
  acts.push_back({ActType::Salutation, {ActArg::greeting}});
  acts.push_back({ActType::Request, {ActArg::hmihy}});
  for (const auto& c : kSlotCombos) acts.push_back({ActType::Request, c});
  acts.push_back({ActType::AskFor, {ActArg::more}});
  for (const auto& c : kSlotCombos) acts.push_back({ActType::Apology, c});
  for (const auto& c : kSlotCombos) acts.push_back({ActType::ExpConfirm, c});
  for (const auto& c : kSlotCombos) acts.push_back({ActType::ImpConfirm, c});
  acts.push_back({ActType::Retrieve, {ActArg::info}});
  acts.push_back({ActType::Provide, {ActArg::unknown}});
  acts.push_back({ActType::Provide, {ActArg::known}});
  acts.push_back({ActType::Salutation, {ActArg::closing}});
  std::array<DialogueAct, kNumActions> out;
  std::copy(acts.begin(), acts.end(), out.begin());
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view slot_name(Slot slot) {
  return kArgNames[static_cast<std::size_t>(ActArg::food) + static_cast<std::size_t>(slot)];
}

std::optional<Slot> slot_from_arg(ActArg arg) {
  switch (arg) {
    case ActArg::food: return Slot::food;
    case ActArg::price: return Slot::price;
    case ActArg::area: return Slot::area;
    default: return std::nullopt;
  }
}

std::vector<Slot> SlotSet::slots() const {
  std::vector<Slot> out;
  for (Slot s : kSlots) {
    if (contains(s)) out.push_back(s);
  }
  return out;
}

SlotSet DialogueAct::slots() const {
  SlotSet set;
  for (ActArg a : args) {
    if (auto s = slot_from_arg(a)) set.insert(*s);
  }
  return set;
}

std::string DialogueAct::to_string() const {
  std::string out(kTypeNames[static_cast<std::size_t>(type)]);
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += kArgNames[static_cast<std::size_t>(args[i])];
  }
  out += ')';
  return out;
}

const std::array<DialogueAct, kNumActions>& catalog() {
  static const auto kCatalog = build_catalog();
  return kCatalog;
}

std::optional<DialogueAct> parse_act(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') return std::nullopt;
  const auto type_name = trim(text.substr(0, open));
  const auto type_it = std::ranges::find(kTypeNames, type_name);
  if (type_it == kTypeNames.end()) return std::nullopt;

  DialogueAct act;
  act.type = static_cast<ActType>(type_it - kTypeNames.begin());
  std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  while (true) {
    const auto comma = inner.find(',');
    const auto name = trim(inner.substr(0, comma));
    const auto arg_it = std::ranges::find(kArgNames, name);
    if (arg_it == kArgNames.end()) return std::nullopt;
    act.args.push_back(static_cast<ActArg>(arg_it - kArgNames.begin()));
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  std::ranges::sort(act.args);
  if (std::ranges::adjacent_find(act.args) != act.args.end()) return std::nullopt;
  if (!act_index(act)) return std::nullopt;
  return act;
}

std::optional<int> act_index(const DialogueAct& act) {
  const auto& cat = catalog();
  const auto it = std::ranges::find(cat, act);
  if (it == cat.end()) return std::nullopt;
  return static_cast<int>(it - cat.begin());
}

std::optional<int> act_index(std::string_view text) {
  auto act = parse_act(text);
  if (!act) return std::nullopt;
  return act_index(*act);
}

const DialogueAct& act_at(int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= kNumActions) {
    throw ContractError("action index " + std::to_string(index) + " outside the catalog");
  }
  return catalog()[static_cast<std::size_t>(index)];
}

std::string act_name(int index) { return act_at(index).to_string(); }

int slot_act_index(ActType type, SlotSet slots) {
  DialogueAct act{type, {}};
  for (Slot s : slots.slots()) {
    act.args.push_back(static_cast<ActArg>(static_cast<int>(ActArg::food) + static_cast<int>(s)));
  }
  auto index = act_index(act);
  if (!index) throw ContractError("no catalog act " + act.to_string());
  return *index;
}

bool expects_user_turn(const DialogueAct& act) {
  switch (act.type) {
    case ActType::Request:
    case ActType::Apology:
    case ActType::ExpConfirm:
    case ActType::AskFor:
      return true;
    default:
      return false;
  }
}

}  // namespace simpleds
