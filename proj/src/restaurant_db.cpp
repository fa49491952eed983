#include "simpleds/restaurant_db.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "simpleds/errors.hpp"

namespace simpleds {

namespace {

std::string normalise(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(normalise(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

const std::string& Restaurant::value(Slot slot) const {
  switch (slot) {
    case Slot::food: return food;
    case Slot::price: return price;
    case Slot::area: return area;
  }
  return food;
}

RestaurantDb::RestaurantDb(std::vector<Restaurant> rows) : rows_(std::move(rows)) {
  for (Slot slot : kSlots) {
    std::set<std::string> distinct;
    for (const auto& r : rows_) distinct.insert(r.value(slot));
    values_[static_cast<std::size_t>(slot)].assign(distinct.begin(), distinct.end());
  }
}

RestaurantDb RestaurantDb::parse(std::string_view content, const std::string& source_name) {
  std::vector<Restaurant> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content.remove_prefix(nl == std::string_view::npos ? content.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    auto fields = split_commas(line);
    if (!header_seen) {
      const std::vector<std::string> expected = {"name", "food", "price", "area", "location"};
      if (fields != expected) throw DataError(source_name, line_no, "header must be name,food,price,area,location");
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) throw DataError(source_name, line_no, "expected 5 fields");
    if (std::ranges::any_of(fields, [](const std::string& f) { return f.empty(); })) {
      throw DataError(source_name, line_no, "empty field");
    }
    rows.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
  }
  if (!header_seen && line_no > 0) throw DataError(source_name, 1, "missing header");
  return RestaurantDb(std::move(rows));
}

RestaurantDb RestaurantDb::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::optional<Restaurant> RestaurantDb::find(std::string_view food, std::string_view price,
                                             std::string_view area) const {
  for (const auto& r : rows_) {
    if (r.food == food && r.price == price && r.area == area) return r;
  }
  return std::nullopt;
}

std::vector<std::string> RestaurantDb::all_texts() const {
  std::vector<std::string> out;
  for (const auto& r : rows_) {
    out.insert(out.end(), {r.name, r.food, r.price, r.area, r.location});
  }
  return out;
}

}  // namespace simpleds
