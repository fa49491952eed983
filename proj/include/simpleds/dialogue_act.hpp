#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simpleds {

enum class ActType : std::uint8_t {
  Salutation,
  Request,
  AskFor,
  Apology,
  ExpConfirm,
  ImpConfirm,
  Retrieve,
  Provide,
};

// Declaration order is the canonical argument order.
enum class ActArg : std::uint8_t {
  greeting,
  closing,
  hmihy,
  more,
  info,
  known,
  unknown,
  food,
  price,
  area,
};

enum class Slot : std::uint8_t { food, price, area };
inline constexpr std::array<Slot, 3> kSlots = {Slot::food, Slot::price, Slot::area};

std::string_view slot_name(Slot slot);
std::optional<Slot> slot_from_arg(ActArg arg);

// Small bitset over the three task slots.
class SlotSet {
 public:
  constexpr SlotSet() = default;
  static constexpr SlotSet all() { return SlotSet(0b111); }

  constexpr bool contains(Slot s) const { return bits_ & bit(s); }
  constexpr void insert(Slot s) { bits_ |= bit(s); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return ((bits_ >> 0) & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1); }
  std::vector<Slot> slots() const;

  constexpr bool operator==(const SlotSet&) const = default;

 private:
  constexpr explicit SlotSet(std::uint8_t bits) : bits_(bits) {}
  static constexpr std::uint8_t bit(Slot s) { return static_cast<std::uint8_t>(1u << static_cast<int>(s)); }
  std::uint8_t bits_ = 0;
};

struct DialogueAct {
  ActType type = ActType::Salutation;
  std::vector<ActArg> args;  // canonical order

  SlotSet slots() const;
  // "ImpConfirm(food,price,area)"
  std::string to_string() const;

  bool operator==(const DialogueAct&) const = default;
};

inline constexpr std::size_t kNumActions = 35;

// The restaurant-domain action alphabet in its fixed index order.
const std::array<DialogueAct, kNumActions>& catalog();

// Accepts optional whitespace and any argument order; arguments are
// normalised before lookup. Returns nullopt for strings outside the catalog.
std::optional<DialogueAct> parse_act(std::string_view text);
std::optional<int> act_index(const DialogueAct& act);
std::optional<int> act_index(std::string_view text);
const DialogueAct& act_at(int index);
std::string act_name(int index);

// Named indices used by the environment and the expert policy.
namespace acts {
inline constexpr int kGreeting = 0;
inline constexpr int kRequestHmihy = 1;
inline constexpr int kAskForMore = 9;
inline constexpr int kRetrieve = 31;
inline constexpr int kProvideUnknown = 32;
inline constexpr int kProvideKnown = 33;
inline constexpr int kClosing = 34;
}  // namespace acts

// Index of the act of `type` over exactly `slots` (Request, Apology,
// ExpConfirm, ImpConfirm with a non-empty slot set).
int slot_act_index(ActType type, SlotSet slots);

// Acts after which the system waits for a user turn.
bool expects_user_turn(const DialogueAct& act);

}  // namespace simpleds
