#include "dicer/dicing/tool_path.hpp"

#include "json.hpp"

namespace dicer {

ToolPath generate_tool_path(const DicingRecipe& recipe) {
  recipe.validate();
  ToolPath path;
  int line = 0;
  auto group = [&](int n, double pitch, CutDirection dir) {
    for (int i = 0; i < n; ++i) {
      CutStroke s;
      s.line_index = line++;
      s.direction = dir;
      s.coordinate = (i - (n - 1) / 2.0) * pitch;
      s.z_depth = -recipe.cut_depth;
      s.feed = recipe.feed_rate;
      path.strokes.push_back(s);
    }
  };
  group(recipe.lines_x, recipe.street_pitch_y, CutDirection::x_pass);
  path.rotation_index = path.strokes.size();
  group(recipe.lines_y, recipe.street_pitch_x, CutDirection::y_pass);
  return path;
}

std::string tool_path_json(const ToolPath& path) {
  nlohmann::json strokes = nlohmann::json::array();
  for (const auto& s : path.strokes) {
    strokes.push_back({{"line_index", s.line_index},
                       {"direction", to_string(s.direction)},
                       {"coordinate", s.coordinate},
                       {"z_depth", s.z_depth},
                       {"feed", s.feed}});
  }
  nlohmann::json j{{"rotation_index", path.rotation_index}, {"strokes", strokes}};
  return j.dump(2);
}

}  // namespace dicer
