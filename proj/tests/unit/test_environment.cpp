#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "shipped_data.hpp"
#include "simpleds/environment.hpp"

using namespace simpleds;
using simpleds::fixtures::shipped_data;

namespace {

DialogueEnvironment make_env(std::uint64_t seed, EnvironmentConfig cfg = fixtures::quiet_config()) {
  return DialogueEnvironment(shipped_data(), cfg, make_rng(seed, 1));
}

bool contains(const std::vector<int>& v, int a) { return std::ranges::find(v, a) != v.end(); }

}  // namespace

TEST(EnvironmentReset, ZeroStateAndGreetingIsValid) {
  auto env = make_env(1);
  const Observation obs = env.reset();
  EXPECT_EQ(obs.state.size(), shipped_data()->vocab.size());
  EXPECT_TRUE(std::ranges::all_of(obs.state, [](double x) { return x == 0.0; }));
  EXPECT_TRUE(contains(obs.valid_actions, acts::kGreeting));
  EXPECT_FALSE(obs.terminal);
  EXPECT_EQ(obs.reward, 0.0);
}

TEST(EnvironmentReset, SameSeedSameGoals) {
  auto a = make_env(42);
  auto b = make_env(42);
  for (int i = 0; i < 20; ++i) {
    a.reset();
    b.reset();
    EXPECT_EQ(a.goal(), b.goal());
  }
}

TEST(EnvironmentReset, MidEpisodeResetDropsContext) {
  auto env = make_env(3);
  env.reset();
  env.step(acts::kGreeting);
  env.step(slot_act_index(ActType::Request, SlotSet::all()));
  ASSERT_GT(env.context().filled_slots().size(), 0);
  env.reset();
  EXPECT_EQ(env.context(), DialogueContext{});
  EXPECT_TRUE(env.transcript().empty());
}

TEST(EnvironmentStep, GreetingRewardUsesDataLikenessAtZeroState) {
  auto env = make_env(5);
  env.reset();
  const StateVector zero(shipped_data()->vocab.size(), 0.0);
  const double dr = shipped_data()->model->posterior(zero)[acts::kGreeting];
  const Observation obs = env.step(acts::kGreeting);
  EXPECT_NEAR(obs.reward, 0.0 * 0.5 + dr * 0.5 - 0.1, 1e-12);
  EXPECT_FALSE(obs.terminal);
}

TEST(EnvironmentStep, InvalidActionLeavesEpisodeUnchanged) {
  auto env = make_env(6);
  env.reset();
  const auto before = env.observation();
  try {
    env.step(acts::kProvideKnown);
    FAIL() << "expected invalid_action";
  } catch (const EpisodeError& e) {
    EXPECT_EQ(e.reason(), "invalid_action");
  }
  EXPECT_EQ(env.observation(), before);
  EXPECT_EQ(env.context().turn, 0);
}

TEST(EnvironmentStep, StepBeforeResetAndAfterTerminalFail) {
  auto env = make_env(7);
  try {
    env.step(acts::kGreeting);
    FAIL();
  } catch (const EpisodeError& e) {
    EXPECT_EQ(e.reason(), "not_ready");
  }
  env.reset();
  for (int a : fixtures::example_actions()) env.step(a);
  ASSERT_TRUE(env.terminal());
  try {
    env.step(acts::kGreeting);
    FAIL();
  } catch (const EpisodeError& e) {
    EXPECT_EQ(e.reason(), "terminal");
  }
}

TEST(EnvironmentStep, ClosingIsTerminal) {
  auto env = make_env(8);
  env.reset(fixtures::example_goal());
  for (int a : fixtures::example_actions()) {
    const Observation obs = env.step(a);
    EXPECT_EQ(obs.terminal, a == acts::kClosing);
  }
}

TEST(EnvironmentStep, ScriptedSequenceNoiseOff) {
  auto env = make_env(9);
  env.reset(fixtures::example_goal());
  const auto actions = fixtures::example_actions();
  const auto words = fixtures::example_verbalisations();
  const RewardConfig rc;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    ASSERT_TRUE(contains(env.valid_actions(), actions[i])) << act_name(actions[i]);
    const Observation obs = env.step(actions[i]);
    EXPECT_EQ(tokenize(obs.system_text), tokenize(words[i])) << i;
    EXPECT_GE(obs.reward, -0.1);
    EXPECT_LE(obs.reward, 0.9);
  }
  EXPECT_TRUE(env.terminal());
  EXPECT_EQ(confirmation_ratio(env.context(), rc), 1.0);
  EXPECT_TRUE(task_success(env.context()));
  EXPECT_EQ(env.transcript().size(), actions.size());
  EXPECT_EQ(env.transcript()[1].user_text, "reasonably priced mexican food in the east of town");
  EXPECT_EQ(env.transcript()[5].user_text, "no");
}

TEST(EnvironmentStep, ValidSetsNonEmptyAndLengthBounded) {
  for (bool noise : {false, true}) {
    auto cfg = fixtures::quiet_config();
    cfg.noise.enabled = noise;
    auto env = make_env(10, cfg);
    Rng pick = make_rng(10, 9);
    for (int episode = 0; episode < 50; ++episode) {
      Observation obs = env.reset();
      int turns = 0;
      while (!obs.terminal) {
        ASSERT_FALSE(obs.valid_actions.empty());
        for (int a : obs.valid_actions) ASSERT_TRUE(a >= 0 && a < static_cast<int>(kNumActions));
        std::uniform_int_distribution<std::size_t> d(0, obs.valid_actions.size() - 1);
        obs = env.step(obs.valid_actions[d(pick)]);
        ++turns;
        for (double x : obs.state) ASSERT_TRUE(x >= 0.0 && x <= 1.0);
      }
      EXPECT_LE(turns, cfg.max_turns);
      EXPECT_TRUE(obs.valid_actions.empty());
    }
  }
}

TEST(EnvironmentStep, DeterministicObservationStream) {
  auto run = [] {
    auto cfg = fixtures::quiet_config();
    cfg.noise.enabled = true;
    auto env = make_env(11, cfg);
    std::vector<Observation> stream;
    for (int episode = 0; episode < 5; ++episode) {
      stream.push_back(env.reset());
      while (!env.terminal()) stream.push_back(env.step(expert_action(env.context())));
    }
    return stream;
  };
  EXPECT_EQ(run(), run());
}

TEST(EnvironmentHuman, TextFillsSlotsLikeTheSimulator) {
  auto env = make_env(12);
  env.reset();
  env.step(acts::kGreeting);
  const auto turn = env.begin_turn(slot_act_index(ActType::Request, SlotSet::all()));
  ASSERT_TRUE(turn.expects_user);
  EXPECT_TRUE(env.turn_pending());
  env.finish_turn_with_text("cheap italian food in the north");
  const auto& c = env.context();
  ASSERT_TRUE(c.filled(Slot::food));
  EXPECT_EQ(c.slot(Slot::food)->value, "italian");
  EXPECT_EQ(c.slot(Slot::price)->value, "cheap");
  EXPECT_EQ(c.slot(Slot::area)->value, "north");
  EXPECT_EQ(c.slot(Slot::area)->confidence, 1.0);
}

TEST(EnvironmentHuman, OutOfVocabularyOnlyAdvancesTheTurn) {
  auto env = make_env(13);
  env.reset();
  env.step(acts::kGreeting);
  const int request = slot_act_index(ActType::Request, SlotSet::all());
  env.begin_turn(request);
  const Observation obs = env.finish_turn_with_text("zxq blorp wibble");
  EXPECT_EQ(env.context().turn, 2);
  EXPECT_TRUE(env.context().filled_slots().empty());
  EXPECT_TRUE(contains(obs.valid_actions, request));
}

TEST(EnvironmentHuman, AbortEndsTheEpisode) {
  auto env = make_env(14);
  env.reset();
  env.begin_turn(acts::kGreeting);
  env.abort();
  EXPECT_TRUE(env.terminal());
  EXPECT_FALSE(env.turn_pending());
  EXPECT_TRUE(env.observation().valid_actions.empty());
}

TEST(ExpertPolicy, FollowsTheScript) {
  auto env = make_env(15);
  env.reset(fixtures::example_goal());
  std::vector<int> taken;
  while (!env.terminal()) {
    taken.push_back(expert_action(env.context()));
    env.step(taken.back());
  }
  EXPECT_EQ(taken, fixtures::example_actions());
}

TEST(Transcript, RowsHaveStateActTextAndUserColumns) {
  auto env = make_env(16);
  env.reset(fixtures::example_goal());
  for (int a : fixtures::example_actions()) env.step(a);
  const std::string text = format_transcript(env.transcript(), env.state());
  std::istringstream in(text);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto tabs = std::ranges::count(line, '\t');
    EXPECT_EQ(tabs, 3) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 8);
  EXPECT_NE(text.find("AskFor(more)\tanything else ?\t[no]"), std::string::npos) << text;
}

TEST(DemonstrationGeneration, ExpertCorpusShape) {
  const auto corpus = generate_demonstrations(shipped_data(), fixtures::quiet_config(), 3, make_rng(1, 0));
  ASSERT_EQ(corpus.dialogues.size(), 3u);
  for (const auto& d : corpus.dialogues) {
    EXPECT_EQ(d.front().action, acts::kGreeting);
    EXPECT_EQ(d.back().action, acts::kClosing);
    for (const auto& t : d) EXPECT_EQ(t.state.size(), shipped_data()->vocab.size());
  }
}
