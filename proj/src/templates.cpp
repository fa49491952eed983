#include "simpleds/templates.hpp"

#include <fstream>
#include <sstream>

#include "simpleds/errors.hpp"

namespace simpleds {

KeyedTextFile parse_keyed_text(std::string_view content, const std::string& source_name) {
  KeyedTextFile file;
  std::size_t line_no = 0;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content.remove_prefix(nl == std::string_view::npos ? content.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw DataError(source_name, line_no, "expected '<key>\\t<text>'");
    }
    std::string key(line.substr(0, tab));
    std::string text(line.substr(tab + 1));
    if (key == "@lang") {
      file.lang = text;
      continue;
    }
    file.entries.push_back({std::move(key), std::move(text), line_no});
  }
  return file;
}

KeyedTextFile read_keyed_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_keyed_text(ss.str(), path);
}

Tokens fill_template(std::string_view text, const Bindings& bindings) {
  std::string filled;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('{', pos);
    if (open == std::string_view::npos) {
      filled += text.substr(pos);
      break;
    }
    const auto close = text.find('}', open);
    if (close == std::string_view::npos) {
      filled += text.substr(pos);
      break;
    }
    filled += text.substr(pos, open - pos);
    const auto name = text.substr(open + 1, close - open - 1);
    const auto it = bindings.find(name);
    if (it == bindings.end()) throw MissingPlaceholder(std::string(name));
    filled += it->second;
    pos = close + 1;
  }
  return tokenize(filled);
}

std::vector<std::string> template_texts(const KeyedTextFile& file) {
  std::vector<std::string> out;
  for (const auto& e : file.entries) out.push_back(e.text);
  return out;
}

TemplateSet TemplateSet::from_file(const KeyedTextFile& file, const std::string& source_name) {
  TemplateSet set;
  set.lang_ = file.lang;
  set.by_act_.resize(kNumActions);
  for (const auto& e : file.entries) {
    const auto index = act_index(e.key);
    if (!index) throw DataError(source_name, e.line, "unknown dialogue act '" + e.key + "'");
    set.by_act_[static_cast<std::size_t>(*index)].push_back(e.text);
  }
  for (std::size_t a = 0; a < kNumActions; ++a) {
    if (set.by_act_[a].empty()) {
      throw DataError(source_name, 0, "no template for " + act_name(static_cast<int>(a)));
    }
  }
  return set;
}

std::vector<std::string> TemplateSet::all_texts() const {
  std::vector<std::string> out;
  for (const auto& list : by_act_) out.insert(out.end(), list.begin(), list.end());
  return out;
}

Tokens verbalize(const TemplateSet& templates, int action, const Bindings& bindings, Rng& rng) {
  act_at(action);  // range check
  const auto& options = templates.templates_for(action);
  const std::string& chosen = options.size() == 1 ? options.front() : options[uniform_index(rng, options.size())];
  return fill_template(chosen, bindings);
}

}  // namespace simpleds

namespace simpleds {

std::vector<std::string> placeholders(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find('{', pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find('}', open);
    if (close == std::string_view::npos) break;
    out.emplace_back(text.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
  return out;
}

}  // namespace simpleds
