#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "facesim/image.hpp"
#include "facesim/rng.hpp"

namespace facesim {

// Compositing order is the enumeration order: BaseHead is painted first,
// Glasses last.
enum class PartCategory {
  BaseHead = 0,
  Hair,
  Brows,
  Eyes,
  Nose,
  Lips,
  Mustache,
  Glasses,
};

inline constexpr int kCategoryCount = 8;

const char* to_string(PartCategory c);
PartCategory category_from_string(const std::string& name);

// One placeable patch: luminance raster plus a straight (non-premultiplied)
// alpha mask in [0,1], anchored at a pixel offset on the base head.
struct FacePart {
  PartCategory category = PartCategory::BaseHead;
  int id = 0;
  FaceImage patch;
  std::vector<double> alpha;  // same length as patch.pixels
  int anchor_x = 0;
  int anchor_y = 0;

  bool operator==(const FacePart& other) const = default;
};

struct PartLibrary {
  std::array<std::vector<FacePart>, kCategoryCount> parts;
  // Categories whose genome index additionally admits an "absent" choice
  // (index == part count). Configured by the manifest; typically Glasses and
  // Mustache.
  std::array<bool, kCategoryCount> allow_absent{};

  const std::vector<FacePart>& of(PartCategory c) const {
    return parts[static_cast<int>(c)];
  }
  int part_count(PartCategory c) const {
    return static_cast<int>(parts[static_cast<int>(c)].size());
  }
  // Number of genome choices for a category (part count, +1 when an absent
  // option is configured).
  int choices(PartCategory c) const {
    return part_count(c) + (allow_absent[static_cast<int>(c)] ? 1 : 0);
  }
  const FaceImage& base_head_image() const {
    return parts[0].front().patch;
  }
  int width() const { return base_head_image().width; }
  int height() const { return base_head_image().height; }
};

// The random-search state: one part index per category. For categories with
// an absent option, index == part_count means "no part".
struct CompositeGenome {
  std::array<int, kCategoryCount> index{};

  bool operator==(const CompositeGenome& other) const = default;
  bool operator<(const CompositeGenome& other) const { return index < other.index; }
};

// Mixed-radix encoding of a genome; unique within a library whose state
// space fits in 64 bits. Used as the memoization key.
std::uint64_t genome_key(const CompositeGenome& g, const PartLibrary& lib);

std::string genome_to_string(const CompositeGenome& g);

bool genome_valid(const CompositeGenome& g, const PartLibrary& lib);

// Loads a JSON manifest listing {category, id, file, anchor_x, anchor_y}
// entries, with patch PGMs and their "<stem>.alpha.pgm" masks next to it.
// Part order is normalized to (category, id).
PartLibrary load_library(const std::filesystem::path& manifest_path);

// Product of per-category choice counts.
std::uint64_t state_space_size(const PartLibrary& lib);

// Deterministic straight-alpha compositing onto a copy of the selected base
// head, in the fixed category order.
FaceImage compose(const CompositeGenome& genome, const PartLibrary& lib);

// Uniform independent index per category; consumes one draw per category in
// enumeration order.
CompositeGenome random_genome(const PartLibrary& lib, Rng& rng);

// Enumerates the whole genome space in lexicographic (category-major) order.
// visit is called once per genome.
template <typename F>
void for_each_genome(const PartLibrary& lib, F&& visit) {
  CompositeGenome g{};
  while (true) {
    visit(const_cast<const CompositeGenome&>(g));
    int c = kCategoryCount - 1;
    for (; c >= 0; --c) {
      if (++g.index[c] < lib.choices(static_cast<PartCategory>(c))) break;
      g.index[c] = 0;
    }
    if (c < 0) return;
  }
}

}  // namespace facesim
