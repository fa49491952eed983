#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simpleds/dialogue_act.hpp"

namespace simpleds {

struct Restaurant {
  std::string name;
  std::string food;
  std::string price;
  std::string area;
  std::string location;

  const std::string& value(Slot slot) const;
  bool operator==(const Restaurant&) const = default;
};

class RestaurantDb {
 public:
  RestaurantDb() = default;
  explicit RestaurantDb(std::vector<Restaurant> rows);

  // Comma-separated with header "name,food,price,area,location". Values are
  // lowercased and trimmed.
  static RestaurantDb parse(std::string_view content, const std::string& source_name);
  static RestaurantDb load(const std::string& path);

  const std::vector<Restaurant>& rows() const { return rows_; }
  // Distinct values of a slot column, sorted.
  const std::vector<std::string>& values(Slot slot) const {
    return values_[static_cast<std::size_t>(slot)];
  }
  // First row matching all three slot values.
  std::optional<Restaurant> find(std::string_view food, std::string_view price,
                                 std::string_view area) const;
  std::vector<std::string> all_texts() const;

 private:
  std::vector<Restaurant> rows_;
  std::array<std::vector<std::string>, 3> values_;
};

}  // namespace simpleds
