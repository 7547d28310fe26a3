#pragma once

#include <cstdint>
#include <filesystem>

#include "facesim/parts.hpp"

namespace facesim {

// Per-category part counts in the conventional listing order
// (head, eyes, lips, noses, brows, hairs, glasses, mustaches).
struct PartCounts {
  int base_heads = 1;
  int eyes = 1;
  int lips = 1;
  int noses = 1;
  int brows = 1;
  int hairs = 1;
  int glasses = 1;
  int mustaches = 1;

  int total() const {
    return base_heads + eyes + lips + noses + brows + hairs + glasses + mustaches;
  }
  int for_category(PartCategory c) const;
};

// Writes parametric grayscale parts with alpha masks and anchors plus a JSON
// manifest into out_dir; byte-identical for identical (counts, seed, raster).
// Returns the manifest path.
std::filesystem::path gen_procedural_parts(const PartCounts& counts, std::uint64_t seed,
                                           const std::filesystem::path& out_dir, int raster = 64,
                                           bool optional_absent = false);

// Synthesizes a gallery of soft-rendered identities under out_dir:
//   gallery/<identity>/<n>.pgm   enrolled images (noise level varies per image)
//   heldout/<identity>/<n>.pgm   clean held-out probes
// Deterministic per seed.
void gen_gallery(int identities, int enrolled_per_identity, int heldout_per_identity,
                 std::uint64_t seed, const std::filesystem::path& out_dir, int raster = 64);

}  // namespace facesim
