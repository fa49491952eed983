#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simpleds/errors.hpp"
#include "simpleds/naive_bayes.hpp"

using namespace simpleds;

namespace {

DemonstrationCorpus toy_corpus() {
  DemonstrationCorpus c;
  c.dialogues = {
      {{{0, 0, 0, 0}, 0}, {{1, 0, 0.5, 0}, 1}},
      {{{0, 0, 0, 0}, 0}, {{1, 1, 0, 0}, 2}},
      {{{0, 0, 0, 0}, 0}, {{0, 0.3, 0, 1}, 1}},
  };
  return c;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST(NaiveBayesTrain, SmoothedCounts) {
  const auto m = NaiveBayesModel::train(toy_corpus(), 4);
  EXPECT_EQ(m.total(), 6);
  EXPECT_NEAR(std::exp(m.log_prior(0)), 4.0 / 41.0, 1e-15);
  EXPECT_NEAR(std::exp(m.log_prior(7)), 1.0 / 41.0, 1e-15);
  EXPECT_NEAR(m.likelihood(1, 0), 2.0 / 4.0, 1e-15);  // on once out of 2, smoothed
  EXPECT_NEAR(m.likelihood(0, 0), 1.0 / 5.0, 1e-15);
  EXPECT_NEAR(m.likelihood(20, 3), 0.5, 1e-15);
}

TEST(NaiveBayesPosterior, MatchesExactBayesRule) {
  // Exact rational arithmetic over the full joint, done outside this code base.
  struct Case {
    std::vector<double> s;
    double p[4];
  };
  const Case cases[] = {
      {{1, 0, 0, 1}, {0.042869126259355524, 0.078495714586222273, 0.041347536901384575, 0.026165238195407427}},
      {{0.2, 0, 0, 0}, {0.14656676316269601, 0.067092939680189215, 0.070682273901763126, 0.022364313226729739}},
      {{0, 0, 0, 0}, {0.41746233617774764, 0.047774772969560356, 0.025165312510714917, 0.015924924323186783}},
  };
  const auto m = NaiveBayesModel::train(toy_corpus(), 4);
  for (const auto& c : cases) {
    const auto p = m.posterior(c.s);
    for (int a = 0; a < 4; ++a) EXPECT_NEAR(p[static_cast<std::size_t>(a)], c.p[a], 1e-12);
  }
}

TEST(NaiveBayesPosterior, SingleObservationIsTheArgmax) {
  DemonstrationCorpus c;
  c.dialogues = {{{{1, 0, 1}, 0}}};
  const auto p = NaiveBayesModel::train(c, 3).posterior(std::vector<double>{1, 0, 1});
  EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(), 0);
  EXPECT_EQ(std::count(p.begin(), p.end(), p[0]), 1);
}

TEST(NaiveBayesPosterior, SymmetricActionsGetEqualMass) {
  DemonstrationCorpus c;
  c.dialogues = {{{{1, 0}, 3}, {{1, 0}, 5}}};
  const auto p = NaiveBayesModel::train(c, 2).posterior(std::vector<double>{1, 0});
  EXPECT_DOUBLE_EQ(p[3], p[5]);
}

TEST(NaiveBayesPosterior, UniformModelGivesOneOverCatalog) {
  DemonstrationCorpus c;
  c.dialogues.emplace_back();
  for (int a = 0; a < static_cast<int>(kNumActions); ++a) c.dialogues[0].push_back({{0.0, 1.0}, a});
  const auto p = NaiveBayesModel::train(c, 2).posterior(std::vector<double>{0.0, 0.7});
  for (double x : p) EXPECT_NEAR(x, 1.0 / 35.0, 1e-12);
}

TEST(NaiveBayesPosterior, NormalisedAndStrictlyInsideUnitInterval) {
  DemonstrationCorpus c;
  c.dialogues.emplace_back();
  // very peaked: many identical observations of one action
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> s(60, 0.0);
    for (int j = 0; j < 60; j += 2) s[static_cast<std::size_t>(j)] = 1.0;
    c.dialogues[0].push_back({s, 4});
  }
  const auto m = NaiveBayesModel::train(c, 60);
  std::vector<double> s(60, 0.0);
  for (int j = 0; j < 60; j += 2) s[static_cast<std::size_t>(j)] = 1.0;
  const auto p = m.posterior(s);
  EXPECT_NEAR(sum(p), 1.0, 1e-9);
  for (double x : p) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(NaiveBayesTrain, Errors) {
  EXPECT_THROW(NaiveBayesModel::train(DemonstrationCorpus{}, 3), ContractError);
  DemonstrationCorpus c;
  c.dialogues = {{{{1, 0}, 0}}};
  EXPECT_THROW(NaiveBayesModel::train(c, 3), DimensionError);
  c.dialogues = {{{{1, 0, 0}, 40}}};
  EXPECT_THROW(NaiveBayesModel::train(c, 3), ContractError);
  const auto m = NaiveBayesModel::train(toy_corpus(), 4);
  EXPECT_THROW(m.posterior(std::vector<double>{1.0}), DimensionError);
}

TEST(NaiveBayesModel, JsonRoundTrip) {
  const auto m = NaiveBayesModel::train(toy_corpus(), 4, 0.25);
  EXPECT_EQ(NaiveBayesModel::from_json(m.to_json()), m);
}

TEST(DemonstrationCorpus, JsonRoundTripAndValidation) {
  DemonstrationCorpus c = toy_corpus();
  c.vocabulary = {"a", "b", "c", "d"};
  EXPECT_EQ(corpus_from_json(corpus_to_json(c), "mem"), c);
  auto j = corpus_to_json(c);
  j["dialogues"][0][0]["action"] = "Dance(food)";
  EXPECT_THROW(corpus_from_json(j, "mem"), DataError);
}

TEST(DemonstrationCorpus, ShippedCorpusLoadsAndCoversTheExpertActs) {
  const auto c = load_corpus(std::string(SIMPLEDS_DATA_DIR) + "/en/demonstrations.json");
  EXPECT_GE(c.dialogues.size(), 10u);
  const auto m = NaiveBayesModel::train(c, c.vocabulary.size());
  for (int a : {acts::kGreeting, acts::kRetrieve, acts::kAskForMore, acts::kClosing}) {
    EXPECT_GT(m.action_count(a), 0) << act_name(a);
  }
}
