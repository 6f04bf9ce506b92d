#include "knapq/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace knapq {

namespace {

using ordered_json = nlohmann::ordered_json;

int64_t integer_field(const ordered_json& node, const char* key) {
  if (!node.contains(key) || !node.at(key).is_number_integer())
    throw std::invalid_argument(std::string("instance file: missing integer \"") + key + "\"");
  return node.at(key).get<int64_t>();
}

}  // namespace

std::string instance_to_json(const KnapsackInstance& inst) {
  const auto& grid = inst.raw_grid();
  if (!grid.has_value())
    throw std::invalid_argument("instance_to_json: instance has no integer grid");
  ordered_json out;
  out["capacity"] = grid->capacity_units;
  if (grid->weight_denom != 1) out["weight_denom"] = grid->weight_denom;
  ordered_json items = ordered_json::array();
  for (size_t k = 0; k < grid->profit_units.size(); ++k) {
    ordered_json item;
    item["p"] = grid->profit_units[k];
    item["w"] = grid->weight_units[k];
    items.push_back(std::move(item));
  }
  out["items"] = std::move(items);
  return out.dump();
}

KnapsackInstance instance_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("instance file: ") + err.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("instance file: top level must be an object");
  const int64_t capacity = integer_field(doc, "capacity");
  int64_t weight_denom = 1;
  if (doc.contains("weight_denom")) weight_denom = integer_field(doc, "weight_denom");
  if (!doc.contains("items") || !doc.at("items").is_array())
    throw std::invalid_argument("instance file: missing \"items\" array");
  std::vector<std::pair<int64_t, int64_t>> raw;
  raw.reserve(doc.at("items").size());
  for (const auto& node : doc.at("items")) {
    if (!node.is_object()) throw std::invalid_argument("instance file: item must be an object");
    raw.emplace_back(integer_field(node, "p"), integer_field(node, "w"));
  }
  return KnapsackInstance::normalize(raw, capacity, weight_denom);
}

void save_instance(const KnapsackInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_instance: cannot open " + path);
  out << instance_to_json(inst) << '\n';
  if (!out) throw std::runtime_error("save_instance: write failed for " + path);
}

KnapsackInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_instance: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

}  // namespace knapq
