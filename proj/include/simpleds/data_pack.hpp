#pragma once

#include <memory>
#include <optional>
#include <string>

#include "simpleds/naive_bayes.hpp"
#include "simpleds/restaurant_db.hpp"
#include "simpleds/templates.hpp"
#include "simpleds/text.hpp"
#include "simpleds/user_simulator.hpp"

namespace simpleds {

// Read-only language resources shared by every session.
struct DataPack {
  std::string lang;
  TemplateSet templates;
  SimulatorRules rules;
  RestaurantDb db;
  Vocabulary vocab;
  // Absent only while bootstrapping the demonstration corpus itself.
  std::optional<NaiveBayesModel> model;
  Tokens affirm_words;
  Tokens negate_words;
};

struct DataPaths {
  std::string templates;
  std::string user_rules;
  std::string restaurants;
  std::string demonstrations;  // may name a missing file

  // <dir>/<lang>/{templates.tsv,user_rules.tsv,restaurants.csv,demonstrations.json}
  static DataPaths in_directory(const std::string& dir, const std::string& lang);
};

// Vocabulary = every token of the templates, the simulator rules and the DB.
Vocabulary build_vocabulary(const TemplateSet& templates, const SimulatorRules& rules,
                            const RestaurantDb& db);

DataPack make_data_pack(TemplateSet templates, SimulatorRules rules, RestaurantDb db);

// Loads the text resources and, when present, trains the action model on the
// demonstration corpus. Throws DataError naming the file on any problem.
DataPack load_data_pack(const DataPaths& paths, double binarisation_threshold = 0.0,
                        bool require_demonstrations = true);

// Trains the model; throws DataError when the corpus was recorded with a
// different vocabulary.
void attach_demonstrations(DataPack& pack, const DemonstrationCorpus& corpus,
                           double binarisation_threshold, const std::string& source_name);

}  // namespace simpleds
