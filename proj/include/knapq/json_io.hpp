#pragma once

#include <string>

#include "knapq/instance.hpp"

namespace knapq {

// Instance file schema: {"capacity": int, "items": [{"p": int, "w": int}, ...]}
// with raw integer profits and weights; a "weight_denom" field follows
// "capacity" when the weight grid is not integral. Field order is fixed and
// the output is one compact line, so equal instances serialize to equal
// bytes. The writer reads the integer grid, so it expects instances built by
// normalize() or loaded from a file.
std::string instance_to_json(const KnapsackInstance& inst);

// Parses the schema above and runs it through normalize().
KnapsackInstance instance_from_json(const std::string& text);

void save_instance(const KnapsackInstance& inst, const std::string& path);
KnapsackInstance load_instance(const std::string& path);

}  // namespace knapq
