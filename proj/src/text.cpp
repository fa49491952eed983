#include "simpleds/text.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "simpleds/errors.hpp"

namespace simpleds {

namespace {

bool is_split_punct(char c) { return c == '.' || c == ',' || c == '!' || c == '?'; }

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (is_split_punct(raw)) {
      flush();
      out.emplace_back(1, raw);
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return out;
}

std::string join(const Tokens& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool is_placeholder(std::string_view token) {
  return token.size() >= 2 && token.front() == '{' && token.back() == '}';
}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw ContractError("duplicate vocabulary word '" + words_[i] + "'");
    }
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VocabularyOverflow::VocabularyOverflow(std::vector<std::string> overflow)
    : Error([&] {
        std::string msg = "vocabulary exceeds " + std::to_string(kMaxVocabulary) + " words; overflow:";
        for (const auto& w : overflow) msg += " " + w;
        return msg;
      }()),
      overflow_(std::move(overflow)) {}

Vocabulary build_vocabulary(std::span<const std::string> texts) {
  std::set<std::string> words;
  for (const auto& text : texts) {
    for (auto& token : tokenize(text)) {
      if (!is_placeholder(token)) words.insert(std::move(token));
    }
  }
  std::vector<std::string> sorted(words.begin(), words.end());
  if (sorted.size() > kMaxVocabulary) {
    throw VocabularyOverflow({sorted.begin() + kMaxVocabulary, sorted.end()});
  }
  return Vocabulary(std::move(sorted));
}

StateVector featurize(const Tokens& system_words, const ScoredUtterance& user, const Vocabulary& vocab) {
  if (user.words.size() != user.scores.size()) {
    throw DimensionError("featurize: user scores", user.words.size(), user.scores.size());
  }
  StateVector state(vocab.size(), 0.0);
  for (const auto& w : system_words) {
    if (auto i = vocab.index_of(w)) state[*i] = 1.0;
  }
  std::vector<bool> seen(vocab.size(), false);
  for (std::size_t k = 0; k < user.words.size(); ++k) {
    auto i = vocab.index_of(user.words[k]);
    if (!i) continue;
    const double score = std::clamp(user.scores[k], 0.0, 1.0);
    state[*i] = seen[*i] ? std::max(state[*i], score) : score;
    seen[*i] = true;
  }
  return state;
}

}  // namespace simpleds
