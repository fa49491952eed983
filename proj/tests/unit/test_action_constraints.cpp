#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "simpleds/action_constraints.hpp"

using namespace simpleds;

namespace {

SlotFill fill(const std::string& value, double confidence, bool confirmed = false) {
  return SlotFill{value, confidence, confirmed};
}

bool has(const std::vector<int>& v, int a) { return std::ranges::binary_search(v, a); }

std::vector<int> of_type(ActType type) {
  std::vector<int> out;
  for (int a = 0; a < static_cast<int>(kNumActions); ++a) {
    if (act_at(a).type == type) out.push_back(a);
  }
  return out;
}

}  // namespace

TEST(LegitimateActions, FreshContextGreetsAndRequests) {
  const auto legit = legitimate_actions(DialogueContext{}, ConstraintConfig{});
  EXPECT_TRUE(has(legit, acts::kGreeting));
  const auto requests = of_type(ActType::Request);
  EXPECT_EQ(requests.size(), 8u);
  for (int a : requests) EXPECT_TRUE(has(legit, a)) << act_name(a);
  for (int a : legit) {
    EXPECT_NE(act_at(a).type, ActType::ExpConfirm);
    EXPECT_NE(act_at(a).type, ActType::ImpConfirm);
  }
  EXPECT_EQ(legit.size(), 9u);
}

TEST(LegitimateActions, AllFilledNoneConfirmed) {
  DialogueContext c;
  c.turn = 2;
  c.slot(Slot::food) = fill("mexican", 0.9);
  c.slot(Slot::price) = fill("cheap", 0.8);
  c.slot(Slot::area) = fill("east", 0.7);
  const auto legit = legitimate_actions(c, ConstraintConfig{});
  for (int a : of_type(ActType::ExpConfirm)) EXPECT_TRUE(has(legit, a));
  for (int a : of_type(ActType::ImpConfirm)) EXPECT_TRUE(has(legit, a));
  for (int a : of_type(ActType::Request)) EXPECT_FALSE(has(legit, a));
  for (int a : of_type(ActType::Apology)) EXPECT_FALSE(has(legit, a));
  EXPECT_EQ(legit.size(), 14u);
}

TEST(LegitimateActions, LowConfidenceSlotsMayBeApologisedFor) {
  DialogueContext c;
  c.turn = 2;
  c.slot(Slot::food) = fill("mexican", 0.3);
  c.slot(Slot::area) = fill("east", 0.9);
  const auto legit = legitimate_actions(c, ConstraintConfig{});
  EXPECT_TRUE(has(legit, slot_act_index(ActType::Apology, SlotSet{[] {
                                          SlotSet s;
                                          s.insert(Slot::food);
                                          return s;
                                        }()})));
  for (int a : of_type(ActType::Apology)) {
    if (act_at(a).slots().contains(Slot::area) || act_at(a).slots().contains(Slot::price)) {
      EXPECT_FALSE(has(legit, a)) << act_name(a);
    }
  }
  EXPECT_FALSE(has(legit, acts::kGreeting));
}

TEST(LegitimateActions, AllConfirmedOnlyRetrieve) {
  DialogueContext c;
  c.turn = 3;
  for (Slot s : kSlots) c.slot(s) = fill("x", 1.0, true);
  EXPECT_EQ(legitimate_actions(c, ConstraintConfig{}), std::vector<int>{acts::kRetrieve});
}

TEST(LegitimateActions, ProvideFollowsLookupResult) {
  DialogueContext c;
  c.turn = 4;
  for (Slot s : kSlots) c.slot(s) = fill("x", 1.0, true);
  c.lookup_done = true;
  EXPECT_EQ(legitimate_actions(c, ConstraintConfig{}), std::vector<int>{acts::kProvideUnknown});
  c.retrieved = Restaurant{};
  EXPECT_EQ(legitimate_actions(c, ConstraintConfig{}), std::vector<int>{acts::kProvideKnown});
  c.info_provided = true;
  EXPECT_EQ(legitimate_actions(c, ConstraintConfig{}), std::vector<int>{acts::kAskForMore});
  c.user_declined_more = true;
  EXPECT_EQ(legitimate_actions(c, ConstraintConfig{}), std::vector<int>{acts::kClosing});
}

TEST(ConstrainedSet, UniformPosteriorGivesFullCatalog) {
  const std::vector<double> p(kNumActions, 1.0 / 35.0);
  DialogueContext c;
  c.turn = 1;
  const auto set = constrained_set(p, c, ConstraintConfig{});
  EXPECT_EQ(set.actions.size(), kNumActions);
  EXPECT_FALSE(set.anomaly);
}

TEST(ConstrainedSet, UnionOfDisjointProbableAndLegitimate) {
  DialogueContext c;
  c.turn = 3;
  c.slot(Slot::food) = fill("mexican", 0.3);
  c.slot(Slot::price) = fill("cheap", 1.0, true);
  c.slot(Slot::area) = fill("east", 1.0, true);
  ASSERT_EQ(legitimate_actions(c, ConstraintConfig{}).size(), 3u);

  std::vector<double> p(kNumActions, 0.1 / 33.0);
  p[acts::kRetrieve] = 0.45;
  p[acts::kClosing] = 0.45;
  const auto set = constrained_set(p, c, ConstraintConfig{});
  EXPECT_EQ(set.actions.size(), 5u);
  EXPECT_TRUE(has(set.actions, acts::kRetrieve));
  EXPECT_TRUE(has(set.actions, acts::kClosing));
}

TEST(ConstrainedSet, AlwaysNonEmptyAndInsideCatalog) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    DialogueContext c;
    c.turn = static_cast<int>(gen() % 10);
    for (Slot s : kSlots) {
      if (u(gen) < 0.6) c.slot(s) = fill("v", u(gen), u(gen) < 0.5);
    }
    c.lookup_done = u(gen) < 0.3;
    if (u(gen) < 0.5) c.retrieved = Restaurant{};
    c.info_provided = u(gen) < 0.3;
    c.user_declined_more = u(gen) < 0.2;
    std::vector<double> p(kNumActions);
    for (double& x : p) x = u(gen) < 0.9 ? u(gen) * 0.01 : u(gen);
    const auto set = constrained_set(p, c, ConstraintConfig{});
    ASSERT_FALSE(set.actions.empty());
    EXPECT_TRUE(std::ranges::is_sorted(set.actions));
    for (int a : set.actions) {
      EXPECT_GE(a, 0);
      EXPECT_LT(a, static_cast<int>(kNumActions));
    }
  }
}

TEST(LegitimateActions, NeverEmptyOverEnumeratedContexts) {
  // every combination of unfilled / filled / confirmed per slot and the
  // lookup, result, provided and declined flags
  for (int code = 0; code < 27 * 16; ++code) {
    DialogueContext c;
    c.turn = 1;
    int rest = code;
    for (Slot s : kSlots) {
      const int state = rest % 3;
      rest /= 3;
      if (state > 0) c.slot(s) = fill("v", 0.9, state == 2);
    }
    c.lookup_done = rest & 1;
    if (rest & 2) c.retrieved = Restaurant{};
    c.info_provided = rest & 4;
    c.user_declined_more = rest & 8;
    EXPECT_FALSE(legitimate_actions(c, ConstraintConfig{}).empty()) << "code " << code;
  }
}

TEST(ProbableActions, ThresholdMonotone) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 0.08);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(kNumActions);
    for (double& x : p) x = u(gen);
    std::vector<int> previous = probable_actions(p, 0.0);
    for (double t = 0.005; t < 0.09; t += 0.005) {
      const auto now = probable_actions(p, t);
      EXPECT_TRUE(std::ranges::includes(previous, now));
      previous = now;
    }
  }
}

TEST(ProbableActions, StrictlyAboveThreshold) {
  std::vector<double> p(kNumActions, 0.0);
  p[3] = 0.01;
  p[4] = 0.0100001;
  EXPECT_EQ(probable_actions(p, 0.01), std::vector<int>{4});
}
