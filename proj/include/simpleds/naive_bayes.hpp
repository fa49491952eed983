#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "simpleds/dialogue_act.hpp"
#include "simpleds/text.hpp"

namespace simpleds {

struct DemonstrationTurn {
  StateVector state;
  int action = 0;

  bool operator==(const DemonstrationTurn&) const = default;
};

struct DemonstrationCorpus {
  std::vector<std::string> vocabulary;  // optional; empty when unknown
  std::vector<std::vector<DemonstrationTurn>> dialogues;

  std::size_t turn_count() const;
  bool operator==(const DemonstrationCorpus&) const = default;
};

// {"vocabulary": [...], "dialogues": [[{"state": [...], "action": "<act>"}, ...], ...]}
nlohmann::json corpus_to_json(const DemonstrationCorpus& corpus);
DemonstrationCorpus corpus_from_json(const nlohmann::json& j, const std::string& source_name);
DemonstrationCorpus load_corpus(const std::string& path);
void save_corpus(const std::string& path, const DemonstrationCorpus& corpus);

// Bernoulli Naive Bayes over binarised word features with Laplace smoothing:
//   Pr(a)          = (count(a) + 1) / (N + 35)
//   Pr(x_j = 1 | a) = (count(x_j on, a) + 1) / (count(a) + 2)
// A feature is "on" when its value exceeds the binarisation threshold.
class NaiveBayesModel {
 public:
  NaiveBayesModel() = default;

  // Throws ContractError on an empty corpus or mismatched state widths.
  static NaiveBayesModel train(const DemonstrationCorpus& corpus, std::size_t feature_count,
                               double binarisation_threshold = 0.0);

  std::size_t feature_count() const { return features_; }
  double binarisation_threshold() const { return threshold_; }
  long total() const { return total_; }
  long action_count(int action) const { return action_counts_.at(static_cast<std::size_t>(action)); }
  long on_count(int action, std::size_t feature) const {
    return on_counts_.at(static_cast<std::size_t>(action) * features_ + feature);
  }

  double log_prior(int action) const;
  double likelihood(int action, std::size_t feature) const;  // Pr(x_j = 1 | a)

  // Pr(a|s) over the whole catalog, computed in log space. Entries are kept
  // strictly inside (0,1).
  std::vector<double> posterior(std::span<const double> state) const;

  nlohmann::json to_json() const;
  static NaiveBayesModel from_json(const nlohmann::json& j);

  bool operator==(const NaiveBayesModel&) const = default;

 private:
  std::size_t features_ = 0;
  double threshold_ = 0.0;
  long total_ = 0;
  std::vector<long> action_counts_;
  std::vector<long> on_counts_;  // action-major
};

}  // namespace simpleds
