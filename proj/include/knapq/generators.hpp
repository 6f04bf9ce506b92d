#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "knapq/instance.hpp"

namespace knapq {

// Instance generator profiles.
//   uniform      profits and weights uniform on 1..1000; no item crosses the
//                large-profit threshold once n is in the hundreds
//   small_items  many low-profit items on a narrow weight range, stressing
//                the small-item reduction
//   large_heavy  three items holding 96% of the profit mass, so the residual
//                small mass is far below every epsilon of interest
//   mixed        two items holding roughly 27% of the mass each, large for
//                epsilon up to 1/2 while most of the mass stays small
enum class GenProfile { uniform, small_items, large_heavy, mixed };

struct GenSpec {
  GenProfile profile = GenProfile::uniform;
  size_t n = 0;
  std::array<uint8_t, 32> seed{};
  uint64_t nonce = 0;
};

GenProfile profile_from_name(const std::string& name);
const char* profile_name(GenProfile profile);

// Short identifier for file names and report rows: "<profile>-n<N>-k<nonce>".
std::string instance_label(const GenSpec& spec);

// Deterministic in spec: equal specs produce byte-identical serializations.
KnapsackInstance generate_instance(const GenSpec& spec);

}  // namespace knapq
