#include <gtest/gtest.h>

#include <map>
#include <set>

#include "simpleds/dialogue_act.hpp"
#include "simpleds/errors.hpp"

using namespace simpleds;

namespace {

// The reference action list, spacing included.
const std::vector<std::string> kReferenceActions = {
    "Salutation(greeting)", "Request(hmihy)", "Request(food)", "Request(price)", "Request(area)",
    "Request(food, price)", "Request(food, area)", "Request(price, area)", "Request(food, price, area)",
    "AskFor(more)", "Apology(food)", "Apology(price)", "Apology(area)", "Apology(food, price)",
    "Apology(food, area)", "Apology(price, area)", "Apology(food, price, area)", "ExpConfirm(food)",
    "ExpConfirm(price)", "ExpConfirm(area)", "ExpConfirm(food, price)", "ExpConfirm(food, area)",
    "ExpConfirm(price, area)", "ExpConfirm(food, price, area)", "ImpConfirm(food)", "ImpConfirm(price)",
    "ImpConfirm(area)", "ImpConfirm(food,price)", "ImpConfirm(food, area)", "ImpConfirm(price, area)",
    "ImpConfirm(food, price, area)", "Retrieve(info)", "Provide(unknown)", "Provide(known)",
    "Salutation(closing)"};

}  // namespace

TEST(Catalog, MatchesReferenceOrder) {
  ASSERT_EQ(kReferenceActions.size(), kNumActions);
  for (std::size_t i = 0; i < kNumActions; ++i) {
    EXPECT_EQ(act_index(kReferenceActions[i]), static_cast<int>(i)) << kReferenceActions[i];
  }
}

TEST(Catalog, CountsPerType) {
  std::map<ActType, int> counts;
  for (const auto& act : catalog()) ++counts[act.type];
  EXPECT_EQ(counts[ActType::Salutation], 2);
  // 9 requests when AskFor(more) is counted as one
  EXPECT_EQ(counts[ActType::Request], 8);
  EXPECT_EQ(counts[ActType::Request] + counts[ActType::AskFor], 9);
  EXPECT_EQ(counts[ActType::Apology], 7);
  EXPECT_EQ(counts[ActType::ExpConfirm], 7);
  EXPECT_EQ(counts[ActType::ImpConfirm], 7);
  EXPECT_EQ(counts[ActType::Retrieve], 1);
  EXPECT_EQ(counts[ActType::Provide], 2);
  EXPECT_EQ(counts[ActType::AskFor], 1);
}

TEST(Catalog, NamesAreUniqueAndRoundTrip) {
  std::set<std::string> names;
  for (int i = 0; i < static_cast<int>(kNumActions); ++i) {
    const std::string name = act_name(i);
    EXPECT_EQ(name.find(' '), std::string::npos);
    EXPECT_TRUE(names.insert(name).second) << name;
    EXPECT_EQ(act_index(name), i);
  }
}

TEST(ParseAct, NormalisesOrderAndWhitespace) {
  EXPECT_EQ(act_index(" ImpConfirm( area ,food ) "), act_index("ImpConfirm(food,area)"));
  EXPECT_EQ(act_name(*act_index("Request(area,price,food)")), "Request(food,price,area)");
}

TEST(ParseAct, RejectsUnknownActs) {
  for (const char* bad : {"", "Hello", "Request()", "Request(food", "Request(food,food)", "Retrieve(food)",
                          "Salutation(more)", "Request(colour)", "ImpConfirm(hmihy)"}) {
    EXPECT_FALSE(act_index(std::string_view(bad)).has_value()) << bad;
  }
  EXPECT_THROW(act_at(35), ContractError);
  EXPECT_THROW(act_at(-1), ContractError);
}

TEST(SlotActs, IndexBySlotSet) {
  SlotSet food_area;
  food_area.insert(Slot::food);
  food_area.insert(Slot::area);
  EXPECT_EQ(act_name(slot_act_index(ActType::ImpConfirm, food_area)), "ImpConfirm(food,area)");
  EXPECT_EQ(act_name(slot_act_index(ActType::Request, SlotSet::all())), "Request(food,price,area)");
  EXPECT_EQ(act_at(acts::kRequestHmihy).slots(), SlotSet());
}

TEST(SlotActs, ExpectsUserTurn) {
  for (const char* name : {"Request(hmihy)", "Request(price)", "Apology(food)", "ExpConfirm(area)", "AskFor(more)"}) {
    EXPECT_TRUE(expects_user_turn(act_at(*act_index(std::string_view(name))))) << name;
  }
  for (const char* name : {"Salutation(greeting)", "ImpConfirm(food)", "Retrieve(info)", "Provide(known)",
                           "Salutation(closing)"}) {
    EXPECT_FALSE(expects_user_turn(act_at(*act_index(std::string_view(name))))) << name;
  }
}
