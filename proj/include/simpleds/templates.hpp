#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "simpleds/dialogue_act.hpp"
#include "simpleds/random.hpp"
#include "simpleds/text.hpp"

namespace simpleds {

// Line-oriented "<key>\t<text>" file shared by the NLG templates and the
// simulator rules. '#' starts a comment line; "@lang\t<tag>" sets the language.
struct KeyedTextFile {
  struct Entry {
    std::string key;
    std::string text;
    std::size_t line = 0;
  };
  std::string lang;
  std::vector<Entry> entries;
};

KeyedTextFile parse_keyed_text(std::string_view content, const std::string& source_name);
KeyedTextFile read_keyed_text_file(const std::string& path);

// Values substituted into {food} {price} {area} {name} {location}.
using Bindings = std::map<std::string, std::string, std::less<>>;

class MissingPlaceholder : public Error {
 public:
  explicit MissingPlaceholder(std::string name)
      : Error("no value for template placeholder {" + name + "}"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Substitutes placeholders then tokenizes.
Tokens fill_template(std::string_view text, const Bindings& bindings);

// Every token any template can produce, placeholders excluded.
std::vector<std::string> template_texts(const KeyedTextFile& file);

class TemplateSet {
 public:
  TemplateSet() = default;
  // Every key must name a catalog act and every act needs a template.
  static TemplateSet from_file(const KeyedTextFile& file, const std::string& source_name);

  const std::string& lang() const { return lang_; }
  const std::vector<std::string>& templates_for(int action) const { return by_act_.at(action); }
  std::vector<std::string> all_texts() const;

 private:
  std::string lang_;
  std::vector<std::vector<std::string>> by_act_;
};

// The act's surface form. With one template per act this is deterministic;
// with several, one is drawn with rng.
Tokens verbalize(const TemplateSet& templates, int action, const Bindings& bindings, Rng& rng);

}  // namespace simpleds

namespace simpleds {

// Names inside {...} in template text, in order of appearance.
std::vector<std::string> placeholders(std::string_view text);

}  // namespace simpleds
