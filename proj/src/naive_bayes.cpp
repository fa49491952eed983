#include "simpleds/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "simpleds/errors.hpp"

namespace simpleds {

std::size_t DemonstrationCorpus::turn_count() const {
  std::size_t n = 0;
  for (const auto& d : dialogues) n += d.size();
  return n;
}

nlohmann::json corpus_to_json(const DemonstrationCorpus& corpus) {
  nlohmann::json dialogues = nlohmann::json::array();
  for (const auto& dialogue : corpus.dialogues) {
    nlohmann::json turns = nlohmann::json::array();
    for (const auto& t : dialogue) turns.push_back({{"state", t.state}, {"action", act_name(t.action)}});
    dialogues.push_back(std::move(turns));
  }
  return {{"vocabulary", corpus.vocabulary}, {"dialogues", std::move(dialogues)}};
}

DemonstrationCorpus corpus_from_json(const nlohmann::json& j, const std::string& source_name) {
  DemonstrationCorpus corpus;
  try {
    if (j.contains("vocabulary")) corpus.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    for (const auto& dialogue : j.at("dialogues")) {
      std::vector<DemonstrationTurn> turns;
      for (const auto& t : dialogue) {
        const auto name = t.at("action").get<std::string>();
        const auto index = act_index(name);
        if (!index) throw DataError(source_name, 0, "unknown action '" + name + "' in demonstration");
        turns.push_back({t.at("state").get<std::vector<double>>(), *index});
      }
      corpus.dialogues.push_back(std::move(turns));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source_name, 0, std::string("malformed demonstration corpus: ") + e.what());
  }
  return corpus;
}

DemonstrationCorpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path, 0, e.what());
  }
  return corpus_from_json(j, path);
}

void save_corpus(const std::string& path, const DemonstrationCorpus& corpus) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << corpus_to_json(corpus).dump() << '\n';
}

NaiveBayesModel NaiveBayesModel::train(const DemonstrationCorpus& corpus, std::size_t feature_count,
                                       double binarisation_threshold) {
  if (corpus.turn_count() == 0) throw ContractError("cannot train Naive Bayes on an empty corpus");
  NaiveBayesModel m;
  m.features_ = feature_count;
  m.threshold_ = binarisation_threshold;
  m.action_counts_.assign(kNumActions, 0);
  m.on_counts_.assign(kNumActions * feature_count, 0);
  for (const auto& dialogue : corpus.dialogues) {
    for (const auto& turn : dialogue) {
      if (turn.state.size() != feature_count) {
        throw DimensionError("train_nb: demonstration state", feature_count, turn.state.size());
      }
      act_at(turn.action);
      const auto a = static_cast<std::size_t>(turn.action);
      ++m.action_counts_[a];
      ++m.total_;
      for (std::size_t j = 0; j < feature_count; ++j) {
        if (turn.state[j] > binarisation_threshold) ++m.on_counts_[a * feature_count + j];
      }
    }
  }
  return m;
}

double NaiveBayesModel::log_prior(int action) const {
  return std::log(static_cast<double>(action_count(action) + 1)) -
         std::log(static_cast<double>(total_ + static_cast<long>(kNumActions)));
}

double NaiveBayesModel::likelihood(int action, std::size_t feature) const {
  return static_cast<double>(on_count(action, feature) + 1) /
         static_cast<double>(action_count(action) + 2);
}

std::vector<double> NaiveBayesModel::posterior(std::span<const double> state) const {
  if (state.size() != features_) throw DimensionError("action_posterior: state", features_, state.size());
  std::vector<double> log_joint(kNumActions);
  for (std::size_t a = 0; a < kNumActions; ++a) {
    const int action = static_cast<int>(a);
    const double denom = std::log(static_cast<double>(action_counts_[a] + 2));
    double lj = log_prior(action);
    for (std::size_t j = 0; j < features_; ++j) {
      const long on = on_counts_[a * features_ + j];
      const long count = state[j] > threshold_ ? on + 1 : action_counts_[a] - on + 1;
      lj += std::log(static_cast<double>(count)) - denom;
    }
    log_joint[a] = lj;
  }
  const double peak = *std::ranges::max_element(log_joint);
  double sum = 0.0;
  for (double& x : log_joint) {
    x = std::exp(x - peak);
    sum += x;
  }
  const double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  for (double& x : log_joint) x = std::clamp(x / sum, lo, hi);
  return log_joint;
}

nlohmann::json NaiveBayesModel::to_json() const {
  return {{"features", features_},
          {"binarisation_threshold", threshold_},
          {"total", total_},
          {"action_counts", action_counts_},
          {"on_counts", on_counts_}};
}

NaiveBayesModel NaiveBayesModel::from_json(const nlohmann::json& j) {
  NaiveBayesModel m;
  m.features_ = j.at("features").get<std::size_t>();
  m.threshold_ = j.at("binarisation_threshold").get<double>();
  m.total_ = j.at("total").get<long>();
  m.action_counts_ = j.at("action_counts").get<std::vector<long>>();
  m.on_counts_ = j.at("on_counts").get<std::vector<long>>();
  if (m.action_counts_.size() != kNumActions || m.on_counts_.size() != kNumActions * m.features_) {
    throw ContractError("Naive Bayes checkpoint has inconsistent count tables");
  }
  return m;
}

}  // namespace simpleds
