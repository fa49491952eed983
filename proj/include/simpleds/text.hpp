#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simpleds/errors.hpp"

namespace simpleds {

using Tokens = std::vector<std::string>;

// Lowercases, splits on whitespace and splits . , ! ? into their own tokens.
Tokens tokenize(std::string_view text);
std::string join(const Tokens& tokens);

// Word features of the dialogue state; entries in [0,1], length = vocabulary size.
using StateVector = std::vector<double>;

struct ScoredUtterance {
  Tokens words;
  std::vector<double> scores;

  bool empty() const { return words.empty(); }
  bool operator==(const ScoredUtterance&) const = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  // Words must be unique; their order defines feature indices.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  std::optional<std::size_t> index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_of(word).has_value(); }

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kMaxVocabulary = 100;

// Union of the tokens of every text, lowercased, deduplicated and sorted.
// Placeholder tokens such as "{food}" are skipped. Throws VocabularyOverflow
// when more than kMaxVocabulary words result.
Vocabulary build_vocabulary(std::span<const std::string> texts);

class VocabularyOverflow : public Error {
 public:
  explicit VocabularyOverflow(std::vector<std::string> overflow);
  const std::vector<std::string>& overflow() const { return overflow_; }

 private:
  std::vector<std::string> overflow_;
};

// System words set their entry to 1; user words then overwrite with their
// confidence (max over repeats). Out-of-vocabulary words are ignored.
StateVector featurize(const Tokens& system_words, const ScoredUtterance& user, const Vocabulary& vocab);

bool is_placeholder(std::string_view token);

}  // namespace simpleds
