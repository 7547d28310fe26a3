#include "facesim/parts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "facesim/error.hpp"
#include "json.hpp"

namespace facesim {

namespace {
const char* kCategoryNames[kCategoryCount] = {
    "BaseHead", "Hair", "Brows", "Eyes", "Nose", "Lips", "Mustache", "Glasses",
};
}

const char* to_string(PartCategory c) { return kCategoryNames[static_cast<int>(c)]; }

PartCategory category_from_string(const std::string& name) {
  for (int i = 0; i < kCategoryCount; ++i) {
    if (name == kCategoryNames[i]) return static_cast<PartCategory>(i);
  }
  throw ManifestError("unknown part category \"" + name + "\"");
}

std::uint64_t genome_key(const CompositeGenome& g, const PartLibrary& lib) {
  std::uint64_t key = 0;
  for (int c = 0; c < kCategoryCount; ++c) {
    key = key * static_cast<std::uint64_t>(lib.choices(static_cast<PartCategory>(c))) +
          static_cast<std::uint64_t>(g.index[c]);
  }
  return key;
}

std::string genome_to_string(const CompositeGenome& g) {
  std::string s;
  for (int c = 0; c < kCategoryCount; ++c) {
    if (c) s.push_back(',');
    s += std::to_string(g.index[c]);
  }
  return s;
}

bool genome_valid(const CompositeGenome& g, const PartLibrary& lib) {
  for (int c = 0; c < kCategoryCount; ++c) {
    if (g.index[c] < 0 || g.index[c] >= lib.choices(static_cast<PartCategory>(c))) return false;
  }
  return true;
}

namespace {

std::filesystem::path alpha_path_for(const std::filesystem::path& image_path) {
  std::filesystem::path p = image_path;
  p.replace_extension();
  p += ".alpha.pgm";
  return p;
}

void validate_library(const PartLibrary& lib) {
  if (lib.parts[0].empty()) throw ManifestError("manifest defines no BaseHead part");
  const FaceImage& head = lib.base_head_image();
  for (const FacePart& h : lib.parts[0]) {
    if (!h.patch.same_dims(head)) {
      throw ImageError("all BaseHead parts must share dimensions");
    }
  }
  for (int c = 0; c < kCategoryCount; ++c) {
    const auto cat = static_cast<PartCategory>(c);
    if (lib.parts[c].empty()) {
      throw ManifestError(std::string("manifest lists no parts for category ") + to_string(cat));
    }
    for (const FacePart& p : lib.parts[c]) {
      if (p.alpha.size() != p.patch.size()) {
        throw ManifestError("alpha mask size mismatch for part " + std::to_string(p.id) +
                            " in category " + to_string(cat));
      }
      for (const double a : p.alpha) {
        if (!(a >= 0.0 && a <= 1.0)) {
          throw ImageError("alpha value outside [0,1] for part " + std::to_string(p.id) +
                           " in category " + to_string(cat));
        }
      }
      if (p.anchor_x < 0 || p.anchor_y < 0 || p.anchor_x + p.patch.width > head.width ||
          p.anchor_y + p.patch.height > head.height) {
        throw ImageError("part " + std::to_string(p.id) + " in category " + to_string(cat) +
                         " exceeds base head bounds (anchor " + std::to_string(p.anchor_x) + "," +
                         std::to_string(p.anchor_y) + ", patch " + std::to_string(p.patch.width) +
                         "x" + std::to_string(p.patch.height) + ", head " +
                         std::to_string(head.width) + "x" + std::to_string(head.height) + ")");
      }
    }
  }
}

}  // namespace

PartLibrary load_library(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ManifestError("cannot open manifest " + manifest_path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError("malformed manifest JSON in " + manifest_path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("parts") || !doc["parts"].is_array()) {
    throw ManifestError("manifest must be an object with a \"parts\" array: " +
                        manifest_path.string());
  }

  PartLibrary lib;
  if (doc.contains("optional_absent")) {
    for (const auto& name : doc["optional_absent"]) {
      lib.allow_absent[static_cast<int>(category_from_string(name.get<std::string>()))] = true;
    }
  }

  const std::filesystem::path dir = manifest_path.parent_path();
  std::array<std::set<int>, kCategoryCount> seen_ids;
  for (const auto& entry : doc["parts"]) {
    for (const char* key : {"category", "id", "file", "anchor_x", "anchor_y"}) {
      if (!entry.contains(key)) {
        throw ManifestError(std::string("manifest part entry missing \"") + key + "\" in " +
                            manifest_path.string());
      }
    }
    FacePart part;
    part.category = category_from_string(entry["category"].get<std::string>());
    part.id = entry["id"].get<int>();
    if (part.id < 0) throw ManifestError("negative part id in " + manifest_path.string());
    if (!seen_ids[static_cast<int>(part.category)].insert(part.id).second) {
      throw ManifestError("duplicate part id " + std::to_string(part.id) + " in category " +
                          to_string(part.category));
    }
    part.anchor_x = entry["anchor_x"].get<int>();
    part.anchor_y = entry["anchor_y"].get<int>();
    const std::filesystem::path img_path = dir / entry["file"].get<std::string>();
    part.patch = read_pgm(img_path);
    const FaceImage mask = read_pgm(alpha_path_for(img_path));
    if (!mask.same_dims(part.patch)) {
      throw ManifestError("alpha mask dimensions differ from patch for " + img_path.string());
    }
    part.alpha.resize(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) part.alpha[i] = mask.pixels[i] / 255.0;
    lib.parts[static_cast<int>(part.category)].push_back(std::move(part));
  }

  for (auto& vec : lib.parts) {
    std::sort(vec.begin(), vec.end(),
              [](const FacePart& a, const FacePart& b) { return a.id < b.id; });
  }
  validate_library(lib);
  return lib;
}

std::uint64_t state_space_size(const PartLibrary& lib) {
  unsigned __int128 total = 1;
  for (int c = 0; c < kCategoryCount; ++c) {
    total *= static_cast<unsigned>(lib.choices(static_cast<PartCategory>(c)));
    if (total > std::numeric_limits<std::uint64_t>::max()) {
      throw MathError("state space size overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(total);
}

FaceImage compose(const CompositeGenome& genome, const PartLibrary& lib) {
  if (!genome_valid(genome, lib)) {
    throw MathError("genome index out of range for library: " + genome_to_string(genome));
  }
  FaceImage out = lib.of(PartCategory::BaseHead)[genome.index[0]].patch;
  for (int c = 1; c < kCategoryCount; ++c) {
    const auto cat = static_cast<PartCategory>(c);
    const int idx = genome.index[c];
    if (idx == lib.part_count(cat)) continue;  // absent choice
    const FacePart& part = lib.of(cat)[idx];
    for (int py = 0; py < part.patch.height; ++py) {
      for (int px = 0; px < part.patch.width; ++px) {
        const std::size_t pi = static_cast<std::size_t>(py) * part.patch.width + px;
        const double a = part.alpha[pi];
        std::uint8_t& dst = out.at(part.anchor_x + px, part.anchor_y + py);
        const double v = a * part.patch.pixels[pi] + (1.0 - a) * dst;
        const long r = std::lround(v);
        dst = static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
      }
    }
  }
  return out;
}

CompositeGenome random_genome(const PartLibrary& lib, Rng& rng) {
  CompositeGenome g;
  for (int c = 0; c < kCategoryCount; ++c) {
    g.index[c] = static_cast<int>(
        uniform_index(rng, static_cast<std::uint64_t>(lib.choices(static_cast<PartCategory>(c)))));
  }
  return g;
}

}  // namespace facesim
