#include "dicer/dicing/recipe.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dicer {

void to_json(nlohmann::json& j, const DicingRecipe& r) {
  j = nlohmann::json{{"wafer_diameter", r.wafer_diameter}, {"street_pitch_x", r.street_pitch_x},
                     {"street_pitch_y", r.street_pitch_y}, {"lines_x", r.lines_x},
                     {"lines_y", r.lines_y},               {"cut_depth", r.cut_depth},
                     {"feed_rate", r.feed_rate},           {"blade_rpm", r.blade_rpm},
                     {"index_clearance", r.index_clearance}};
}

void from_json(const nlohmann::json& j, DicingRecipe& r) {
  const DicingRecipe d;
  r.wafer_diameter = j.value("wafer_diameter", d.wafer_diameter);
  r.street_pitch_x = j.value("street_pitch_x", d.street_pitch_x);
  r.street_pitch_y = j.value("street_pitch_y", d.street_pitch_y);
  r.lines_x = j.value("lines_x", d.lines_x);
  r.lines_y = j.value("lines_y", d.lines_y);
  r.cut_depth = j.value("cut_depth", d.cut_depth);
  r.feed_rate = j.value("feed_rate", d.feed_rate);
  r.blade_rpm = j.value("blade_rpm", d.blade_rpm);
  r.index_clearance = j.value("index_clearance", d.index_clearance);
}

void DicingRecipe::validate() const {
  auto bad = [](const char* what) { throw std::invalid_argument(std::string("recipe: ") + what); };
  if (!(wafer_diameter > 0.0)) bad("wafer_diameter must be positive");
  if (!(street_pitch_x > 0.0) || !(street_pitch_y > 0.0)) bad("street pitch must be positive");
  if (lines_x < 0 || lines_y < 0) bad("line counts must be non-negative");
  if (lines_x + lines_y == 0) bad("recipe has no cuts");
  if (!(cut_depth > 0.0)) bad("cut_depth must be positive");
  if (!(feed_rate > 0.0)) bad("feed_rate must be positive");
  if (blade_rpm < 10000 || blade_rpm > 60000) bad("blade_rpm must be within 10000..60000");
  if (!(index_clearance > 0.0)) bad("index_clearance must be positive");
  // Outermost cut lines must still cross the wafer.
  if (lines_x > 1 && (lines_x - 1) * street_pitch_y >= wafer_diameter) bad("x cuts exceed the wafer");
  if (lines_y > 1 && (lines_y - 1) * street_pitch_x >= wafer_diameter) bad("y cuts exceed the wafer");
}

DicingRecipe parse_recipe(const std::string& text) {
  DicingRecipe r = nlohmann::json::parse(text).get<DicingRecipe>();
  r.validate();
  return r;
}

DicingRecipe load_recipe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open recipe " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_recipe(ss.str());
}

}  // namespace dicer
