#pragma once

#include <string>

#include "json.hpp"

namespace dicer {

struct DicingRecipe {
  double wafer_diameter = 300.0;
  double street_pitch_x = 3.0;
  double street_pitch_y = 3.0;
  int lines_x = 72;
  int lines_y = 72;
  double cut_depth = 0.5;
  double feed_rate = 100.0;
  int blade_rpm = 30000;
  double index_clearance = 2.0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
  bool operator==(const DicingRecipe&) const = default;
};

void to_json(nlohmann::json& j, const DicingRecipe& r);
void from_json(const nlohmann::json& j, DicingRecipe& r);

DicingRecipe parse_recipe(const std::string& text);
DicingRecipe load_recipe(const std::string& path);

}  // namespace dicer
