#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dicer/dicing/recipe.hpp"
#include "dicer/sim/wafer_sim.hpp"

namespace dicer {

struct CutStroke {
  int line_index = 0;
  CutDirection direction = CutDirection::x_pass;
  double coordinate = 0.0;  // wafer y for x_pass, wafer x for y_pass
  double z_depth = 0.0;     // Z target while cutting (negative)
  double feed = 0.0;
  bool operator==(const CutStroke&) const = default;
};

struct ToolPath {
  std::vector<CutStroke> strokes;
  // The 90 degree rotation happens before this stroke; equals strokes.size() when there is no second group.
  std::size_t rotation_index = 0;
};

ToolPath generate_tool_path(const DicingRecipe& recipe);
std::string tool_path_json(const ToolPath& path);

}  // namespace dicer
