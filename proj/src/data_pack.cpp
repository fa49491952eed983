#include "simpleds/data_pack.hpp"

#include <filesystem>

#include "simpleds/errors.hpp"

namespace simpleds {

DataPaths DataPaths::in_directory(const std::string& dir, const std::string& lang) {
  const auto base = std::filesystem::path(dir) / lang;
  return {(base / "templates.tsv").string(), (base / "user_rules.tsv").string(),
          (base / "restaurants.csv").string(), (base / "demonstrations.json").string()};
}

Vocabulary build_vocabulary(const TemplateSet& templates, const SimulatorRules& rules,
                            const RestaurantDb& db) {
  std::vector<std::string> texts = templates.all_texts();
  for (auto& t : rules.all_texts()) texts.push_back(std::move(t));
  for (auto& t : db.all_texts()) texts.push_back(std::move(t));
  return build_vocabulary(texts);
}

DataPack make_data_pack(TemplateSet templates, SimulatorRules rules, RestaurantDb db) {
  DataPack pack;
  pack.lang = templates.lang();
  pack.vocab = build_vocabulary(templates, rules, db);
  pack.affirm_words = tokenize(rules.affirm());
  pack.negate_words = tokenize(rules.negate());
  for (auto& w : tokenize(rules.decline())) pack.negate_words.push_back(std::move(w));
  pack.templates = std::move(templates);
  pack.rules = std::move(rules);
  pack.db = std::move(db);
  return pack;
}

void attach_demonstrations(DataPack& pack, const DemonstrationCorpus& corpus,
                           double binarisation_threshold, const std::string& source_name) {
  if (!corpus.vocabulary.empty() && corpus.vocabulary != pack.vocab.words()) {
    throw DataError(source_name, 0, "demonstrations were recorded with a different vocabulary");
  }
  try {
    pack.model = NaiveBayesModel::train(corpus, pack.vocab.size(), binarisation_threshold);
  } catch (const ContractError& e) {
    throw DataError(source_name, 0, e.what());
  }
}

DataPack load_data_pack(const DataPaths& paths, double binarisation_threshold,
                        bool require_demonstrations) {
  auto templates = TemplateSet::from_file(read_keyed_text_file(paths.templates), paths.templates);
  auto rules = SimulatorRules::from_file(read_keyed_text_file(paths.user_rules), paths.user_rules);
  auto db = RestaurantDb::load(paths.restaurants);
  DataPack pack;
  try {
    pack = make_data_pack(std::move(templates), std::move(rules), std::move(db));
  } catch (const VocabularyOverflow& e) {
    throw DataError(paths.templates, 0, e.what());
  }
  if (std::filesystem::exists(paths.demonstrations)) {
    attach_demonstrations(pack, load_corpus(paths.demonstrations), binarisation_threshold,
                          paths.demonstrations);
  } else if (require_demonstrations) {
    throw DataError(paths.demonstrations, 0, "demonstration corpus not found");
  }
  return pack;
}

}  // namespace simpleds
