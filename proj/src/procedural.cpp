#include "facesim/procedural.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "facesim/error.hpp"
#include "json.hpp"

namespace facesim {

int PartCounts::for_category(PartCategory c) const {
  switch (c) {
    case PartCategory::BaseHead: return base_heads;
    case PartCategory::Eyes: return eyes;
    case PartCategory::Lips: return lips;
    case PartCategory::Nose: return noses;
    case PartCategory::Brows: return brows;
    case PartCategory::Hair: return hairs;
    case PartCategory::Glasses: return glasses;
    case PartCategory::Mustache: return mustaches;
  }
  return 0;
}

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Double-precision paint target. lum is premixed luminance, alpha the
// accumulated coverage; both quantize to PGM on write.
struct Canvas {
  int w, h;
  std::vector<double> lum;
  std::vector<double> alpha;

  Canvas(int w_, int h_, double bg = 0.0)
      : w(w_), h(h_), lum(static_cast<std::size_t>(w_) * h_, bg),
        alpha(static_cast<std::size_t>(w_) * h_, 0.0) {}

  void paint(int x, int y, double cov, double value) {
    if (x < 0 || y < 0 || x >= w || y >= h || cov <= 0.0) return;
    cov = clamp01(cov);
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    lum[i] = cov * value + (1.0 - cov) * lum[i];
    alpha[i] = cov + (1.0 - cov) * alpha[i];
  }
};

// Approximate pixel coverage of an axis-aligned ellipse with a soft edge.
double ellipse_cov(double x, double y, double cx, double cy, double rx, double ry,
                   double soft = 1.0) {
  const double nx = (x - cx) / rx;
  const double ny = (y - cy) / ry;
  const double d = std::sqrt(nx * nx + ny * ny);
  const double dist_px = (1.0 - d) * std::min(rx, ry);  // >0 inside
  return clamp01(0.5 + dist_px / soft);
}

// Coverage of an ellipse ring (outline) of the given stroke thickness.
double ring_cov(double x, double y, double cx, double cy, double r, double thickness,
                double soft = 1.0) {
  const double d = std::hypot(x - cx, y - cy);
  const double dist = thickness / 2.0 - std::fabs(d - r);
  return clamp01(0.5 + dist / soft);
}

void fill_ellipse(Canvas& c, double cx, double cy, double rx, double ry, double value,
                  double soft = 1.0, double max_cov = 1.0) {
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - rx - 2)));
  const int x1 = std::min(c.w - 1, static_cast<int>(std::ceil(cx + rx + 2)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - ry - 2)));
  const int y1 = std::min(c.h - 1, static_cast<int>(std::ceil(cy + ry + 2)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      c.paint(x, y, max_cov * ellipse_cov(x, y, cx, cy, rx, ry, soft), value);
    }
  }
}

// Tight bounding box of nonzero alpha; used to crop parts to patches.
struct BBox {
  int x0, y0, x1, y1;
  bool empty() const { return x1 < x0; }
};

BBox alpha_bbox(const Canvas& c, double threshold = 1.0 / 512.0) {
  BBox b{c.w, c.h, -1, -1};
  for (int y = 0; y < c.h; ++y) {
    for (int x = 0; x < c.w; ++x) {
      if (c.alpha[static_cast<std::size_t>(y) * c.w + x] > threshold) {
        b.x0 = std::min(b.x0, x);
        b.y0 = std::min(b.y0, y);
        b.x1 = std::max(b.x1, x);
        b.y1 = std::max(b.y1, y);
      }
    }
  }
  return b;
}

std::uint8_t quantize(double v) {
  const long r = std::lround(v);
  return static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
}

struct RenderedPart {
  FaceImage patch;
  FaceImage mask;  // alpha * 255
  int anchor_x = 0;
  int anchor_y = 0;
};

RenderedPart crop_part(const Canvas& c) {
  BBox b = alpha_bbox(c);
  if (b.empty()) b = {0, 0, 0, 0};
  RenderedPart out;
  out.anchor_x = b.x0;
  out.anchor_y = b.y0;
  out.patch = FaceImage(b.x1 - b.x0 + 1, b.y1 - b.y0 + 1);
  out.mask = FaceImage(out.patch.width, out.patch.height);
  for (int y = 0; y < out.patch.height; ++y) {
    for (int x = 0; x < out.patch.width; ++x) {
      const std::size_t src = static_cast<std::size_t>(y + b.y0) * c.w + (x + b.x0);
      out.patch.at(x, y) = quantize(c.lum[src]);
      out.mask.at(x, y) = quantize(c.alpha[src] * 255.0);
    }
  }
  return out;
}

// ---- part renderers (geometry in canonical 64x64 units, scaled by s) ----

RenderedPart render_base_head(Rng& rng, int raster) {
  const double s = raster / 64.0;
  Canvas c(raster, raster);
  const double skin = uniform_range(rng, 140.0, 190.0);
  const double rx = uniform_range(rng, 17.0, 21.0) * s;
  const double ry = uniform_range(rng, 24.0, 28.0) * s;
  const double cx = 32.0 * s, cy = 34.0 * s;
  const double shade = uniform_range(rng, 0.04, 0.12);
  const int x0 = 0, x1 = raster - 1;
  for (int y = x0; y <= x1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double cov = ellipse_cov(x, y, cx, cy, rx, ry, 1.5 * s);
      if (cov <= 0.0) continue;
      const double v = skin * (1.0 - shade * (y - cy) / ry);
      c.paint(x, y, cov, v);
    }
  }
  // faint ears
  const double ear = uniform_range(rng, 2.0, 3.2) * s;
  fill_ellipse(c, cx - rx, cy + 1.0 * s, ear, ear * 1.4, skin * 0.92, 1.2 * s);
  fill_ellipse(c, cx + rx, cy + 1.0 * s, ear, ear * 1.4, skin * 0.92, 1.2 * s);
  // the head is the compositing canvas, so it spans the full raster
  RenderedPart out;
  out.anchor_x = 0;
  out.anchor_y = 0;
  out.patch = FaceImage(raster, raster);
  out.mask = FaceImage(raster, raster, 255);
  for (std::size_t i = 0; i < c.lum.size(); ++i) out.patch.pixels[i] = quantize(c.lum[i]);
  return out;
}

RenderedPart render_hair(Rng& rng, int raster) {
  const double s = raster / 64.0;
  Canvas c(raster, raster);
  const double value = uniform_range(rng, 30.0, 95.0);
  const double rx = uniform_range(rng, 17.0, 21.5) * s;
  const double ry = uniform_range(rng, 10.0, 14.0) * s;
  const double cy = uniform_range(rng, 14.0, 17.0) * s;
  const double cut = uniform_range(rng, 18.0, 22.0) * s;
  const double amp = uniform_range(rng, 0.0, 1.8) * s;
  const double freq = uniform_range(rng, 0.25, 0.7);
  const double phase = uniform_range(rng, 0.0, 6.283);
  for (int y = 0; y < raster; ++y) {
    for (int x = 0; x < raster; ++x) {
      double cov = ellipse_cov(x, y, 32.0 * s, cy, rx, ry, 1.2 * s);
      if (cov <= 0.0) continue;
      const double edge = cut + amp * std::sin(freq * x / s + phase);
      cov *= clamp01(0.5 + (edge - y) / (1.5 * s));  // fade below the fringe line
      c.paint(x, y, cov, value);
    }
  }
  return crop_part(c);
}

RenderedPart render_brows(Rng& rng, int raster) {
  const double s = raster / 64.0;
  Canvas c(raster, raster);
  const double value = uniform_range(rng, 25.0, 85.0);
  const double ex = uniform_range(rng, 8.0, 11.0) * s;
  const double by = uniform_range(rng, 20.0, 22.5) * s;
  const double len = uniform_range(rng, 3.5, 5.0) * s;
  const double th = uniform_range(rng, 0.9, 1.8) * s;
  const double tilt = uniform_range(rng, -0.25, 0.25);
  for (const double side : {-1.0, 1.0}) {
    const double cx = 32.0 * s + side * ex;
    for (int y = 0; y < raster; ++y) {
      for (int x = 0; x < raster; ++x) {
        const double yy = y + tilt * side * (x - cx);
        c.paint(x, y, ellipse_cov(x, yy, cx, by, len, th, 0.9 * s), value);
      }
    }
  }
  return crop_part(c);
}

RenderedPart render_eyes(Rng& rng, int raster) {
  const double s = raster / 64.0;
  Canvas c(raster, raster);
  const double ex = uniform_range(rng, 8.0, 11.0) * s;
  const double ey = uniform_range(rng, 24.0, 27.0) * s;
  const double rx = uniform_range(rng, 2.8, 4.2) * s;
  const double ry = uniform_range(rng, 1.7, 2.6) * s;
  const double sclera = uniform_range(rng, 200.0, 235.0);
  const double iris = uniform_range(rng, 15.0, 70.0);
  const double ir = uniform_range(rng, 1.0, std::min(1.9, 0.85 * ry / s)) * s;
  const double gaze = uniform_range(rng, -0.6, 0.6) * s;
  for (const double side : {-1.0, 1.0}) {
    const double cx = 32.0 * s + side * ex;
    fill_ellipse(c, cx, ey, rx, ry, sclera, 0.8 * s);
    fill_ellipse(c, cx + gaze, ey, ir, ir, iris, 0.7 * s);
  }
  return crop_part(c);
}

RenderedPart render_nose(Rng& rng, int raster) {
  const double s = raster / 64.0;
  Canvas c(raster, raster);
  const double top = uniform_range(rng, 27.0, 29.0) * s;
  const double bottom = uniform_range(rng, 36.0, 40.0) * s;
  const double wid = uniform_range(rng, 2.2, 4.2) * s;
  const double value = uniform_range(rng, 115.0, 155.0);
  for (int y = 0; y < raster; ++y) {
    if (y < top - 1 || y > bottom + 1) continue;
    const double t = clamp01((y - top) / (bottom - top));
    const double half = 0.6 * s + wid * t;
    for (int x = 0; x < raster; ++x) {
      const double dist = half - std::fabs(x - 32.0 * s);
      double cov = clamp01(0.5 + dist / (0.9 * s));
      cov *= clamp01(0.5 + std::min(y - top, bottom - y) / (0.9 * s));
      c.paint(x, y, cov, value);
    }
  }
  // nostril shadows
  const double nb = bottom - 0.8 * s;
  fill_ellipse(c, 32.0 * s - wid * 0.7, nb, 0.9 * s, 0.7 * s, value * 0.55, 0.7 * s);
  fill_ellipse(c, 32.0 * s + wid * 0.7, nb, 0.9 * s, 0.7 * s, value * 0.55, 0.7 * s);
  return crop_part(c);
}

RenderedPart render_lips(Rng& rng, int raster) {
  const double s = raster / 64.0;
  Canvas c(raster, raster);
  const double my = uniform_range(rng, 42.5, 46.5) * s;
  const double rx = uniform_range(rng, 4.5, 7.0) * s;
  const double ry = uniform_range(rng, 1.4, 2.6) * s;
  const double value = uniform_range(rng, 65.0, 120.0);
  const double curve = uniform_range(rng, -1.2, 2.2) * s;
  for (int y = 0; y < raster; ++y) {
    for (int x = 0; x < raster; ++x) {
      const double bend = curve * std::pow((x - 32.0 * s) / rx, 2.0);
      const double cov = ellipse_cov(x, y - bend, 32.0 * s, my, rx, ry, 0.8 * s);
      c.paint(x, y, cov, value);
    }
  }
  // parting line
  for (int x = 0; x < raster; ++x) {
    const double bend = curve * std::pow((x - 32.0 * s) / rx, 2.0);
    for (int y = 0; y < raster; ++y) {
      const double inside = ellipse_cov(x, y - bend, 32.0 * s, my, rx * 0.92, ry, 0.8 * s);
      const double line = clamp01(0.5 + (0.45 * s - std::fabs(y - bend - my)) / (0.6 * s));
      c.paint(x, y, inside * line, value * 0.6);
    }
  }
  return crop_part(c);
}

RenderedPart render_mustache(Rng& rng, int raster) {
  const double s = raster / 64.0;
  Canvas c(raster, raster);
  const double my = uniform_range(rng, 39.5, 41.5) * s;
  const double rx = uniform_range(rng, 4.5, 7.0) * s;
  const double ry = uniform_range(rng, 1.1, 2.0) * s;
  const double value = uniform_range(rng, 20.0, 60.0);
  const double notch = uniform_range(rng, 0.5, 1.1) * s;
  for (int y = 0; y < raster; ++y) {
    for (int x = 0; x < raster; ++x) {
      double cov = ellipse_cov(x, y, 32.0 * s, my, rx, ry, 0.8 * s);
      cov *= 1.0 - ellipse_cov(x, y, 32.0 * s, my + ry, notch, ry * 0.9, 0.7 * s);
      c.paint(x, y, cov, value);
    }
  }
  return crop_part(c);
}

RenderedPart render_glasses(Rng& rng, int raster) {
  const double s = raster / 64.0;
  Canvas c(raster, raster);
  const double ex = uniform_range(rng, 8.0, 10.5) * s;
  const double ey = uniform_range(rng, 24.0, 26.5) * s;
  const double r = uniform_range(rng, 4.4, 6.0) * s;
  const double th = uniform_range(rng, 0.8, 1.3) * s;
  const double value = uniform_range(rng, 15.0, 55.0);
  for (int y = 0; y < raster; ++y) {
    for (int x = 0; x < raster; ++x) {
      double cov = std::max(ring_cov(x, y, 32.0 * s - ex, ey, r, th, 0.8 * s),
                            ring_cov(x, y, 32.0 * s + ex, ey, r, th, 0.8 * s));
      // bridge between the lenses
      if (std::fabs(x - 32.0 * s) < ex - r + 1.5 * s) {
        const double bar = clamp01(0.5 + (th / 2.0 - std::fabs(y - (ey - r * 0.35))) / (0.8 * s));
        cov = std::max(cov, bar);
      }
      c.paint(x, y, cov, value);
    }
  }
  return crop_part(c);
}

RenderedPart render_part(PartCategory cat, Rng& rng, int raster) {
  switch (cat) {
    case PartCategory::BaseHead: return render_base_head(rng, raster);
    case PartCategory::Hair: return render_hair(rng, raster);
    case PartCategory::Brows: return render_brows(rng, raster);
    case PartCategory::Eyes: return render_eyes(rng, raster);
    case PartCategory::Nose: return render_nose(rng, raster);
    case PartCategory::Lips: return render_lips(rng, raster);
    case PartCategory::Mustache: return render_mustache(rng, raster);
    case PartCategory::Glasses: return render_glasses(rng, raster);
  }
  throw MathError("unreachable part category");
}

std::string part_file_name(PartCategory cat, int id) {
  std::string name = to_string(cat);
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03d.pgm", id);
  return name + buf;
}

}  // namespace

std::filesystem::path gen_procedural_parts(const PartCounts& counts, std::uint64_t seed,
                                           const std::filesystem::path& out_dir, int raster,
                                           bool optional_absent) {
  for (int c = 0; c < kCategoryCount; ++c) {
    if (counts.for_category(static_cast<PartCategory>(c)) < 1) {
      throw ConfigError(std::string("part count for ") + to_string(static_cast<PartCategory>(c)) +
                        " must be at least 1");
    }
  }
  if (raster < 32) throw ConfigError("raster must be at least 32 pixels");
  std::filesystem::create_directories(out_dir);

  nlohmann::json manifest;
  manifest["raster"] = {{"width", raster}, {"height", raster}};
  if (optional_absent) {
    manifest["optional_absent"] = {"Glasses", "Mustache"};
  }
  auto& parts_json = manifest["parts"] = nlohmann::json::array();

  for (int c = 0; c < kCategoryCount; ++c) {
    const auto cat = static_cast<PartCategory>(c);
    const int n = counts.for_category(cat);
    for (int id = 0; id < n; ++id) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c) * 1009 + id));
      const RenderedPart rp = render_part(cat, rng, raster);
      const std::string file = part_file_name(cat, id);
      write_pgm(rp.patch, out_dir / file);
      std::filesystem::path mask_path = out_dir / file;
      mask_path.replace_extension();
      mask_path += ".alpha.pgm";
      write_pgm(rp.mask, mask_path);
      parts_json.push_back({{"category", to_string(cat)},
                            {"id", id},
                            {"file", file},
                            {"anchor_x", rp.anchor_x},
                            {"anchor_y", rp.anchor_y}});
    }
  }

  const std::filesystem::path manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw ManifestError("cannot write manifest " + manifest_path.string());
  out << manifest.dump(2) << "\n";
  if (!out) throw ManifestError("I/O failure writing " + manifest_path.string());
  return manifest_path;
}

namespace {

// Stable per-identity face parameters; per-image jitter stays small relative
// to the spread across identities so the gallery is identifiable.
struct IdentityParams {
  double skin, rx, ry, cy;
  double hair_value, hair_cut;
  double eye_dx, eye_y, eye_rx, eye_ry, iris;
  double brow_y, brow_len, brow_th, brow_value, brow_tilt;
  double nose_w, nose_len, nose_value;
  double mouth_y, mouth_rx, mouth_ry, mouth_value, mouth_curve;
  double shade_x, shade_y;
};

IdentityParams draw_identity(Rng& rng) {
  IdentityParams p;
  p.skin = uniform_range(rng, 125.0, 195.0);
  p.rx = uniform_range(rng, 16.0, 22.0);
  p.ry = uniform_range(rng, 23.0, 28.0);
  p.cy = uniform_range(rng, 32.5, 35.5);
  p.hair_value = uniform_range(rng, 30.0, 105.0);
  p.hair_cut = uniform_range(rng, 15.0, 22.0);
  p.eye_dx = uniform_range(rng, 7.5, 11.5);
  p.eye_y = uniform_range(rng, 23.5, 27.0);
  p.eye_rx = uniform_range(rng, 2.6, 4.3);
  p.eye_ry = uniform_range(rng, 1.6, 2.7);
  p.iris = uniform_range(rng, 15.0, 75.0);
  p.brow_y = uniform_range(rng, 19.5, 22.5);
  p.brow_len = uniform_range(rng, 3.4, 5.2);
  p.brow_th = uniform_range(rng, 0.8, 1.9);
  p.brow_value = uniform_range(rng, 25.0, 90.0);
  p.brow_tilt = uniform_range(rng, -0.3, 0.3);
  p.nose_w = uniform_range(rng, 2.0, 4.4);
  p.nose_len = uniform_range(rng, 8.0, 12.0);
  p.nose_value = uniform_range(rng, 0.78, 0.95);  // relative to skin
  p.mouth_y = uniform_range(rng, 42.0, 47.0);
  p.mouth_rx = uniform_range(rng, 4.2, 7.2);
  p.mouth_ry = uniform_range(rng, 1.3, 2.7);
  p.mouth_value = uniform_range(rng, 60.0, 125.0);
  p.mouth_curve = uniform_range(rng, -1.5, 2.5);
  p.shade_x = uniform_range(rng, -1.0, 1.0);
  p.shade_y = uniform_range(rng, -1.0, 1.0);
  return p;
}

FaceImage render_identity_image(const IdentityParams& id, Rng& img_rng, double noise_sigma,
                                int raster) {
  const double s = raster / 64.0;
  const double jx = uniform_range(img_rng, -0.8, 0.8) * s;
  const double jy = uniform_range(img_rng, -0.8, 0.8) * s;
  const double grad = uniform_range(img_rng, -8.0, 8.0);
  const double offset = uniform_range(img_rng, -5.0, 5.0);
  const double shade_jit = uniform_range(img_rng, -0.25, 0.25);

  const double cx = 32.0 * s + jx;
  const double cy = id.cy * s + jy;
  const double rx = id.rx * s, ry = id.ry * s;

  std::vector<double> buf(static_cast<std::size_t>(raster) * raster, 18.0);
  auto blend = [&](int x, int y, double cov, double v) {
    if (x < 0 || y < 0 || x >= raster || y >= raster || cov <= 0.0) return;
    const std::size_t i = static_cast<std::size_t>(y) * raster + x;
    cov = clamp01(cov);
    buf[i] = cov * v + (1.0 - cov) * buf[i];
  };

  // head with directional shading
  for (int y = 0; y < raster; ++y) {
    for (int x = 0; x < raster; ++x) {
      const double cov = ellipse_cov(x, y, cx, cy, rx, ry, 2.0 * s);
      if (cov <= 0.0) continue;
      const double shade = 1.0 + (id.shade_x + shade_jit) * 0.12 * (x - cx) / rx +
                           (id.shade_y) * 0.10 * (y - cy) / ry;
      blend(x, y, cov, id.skin * shade);
    }
  }
  // hair cap
  for (int y = 0; y < raster; ++y) {
    for (int x = 0; x < raster; ++x) {
      double cov = ellipse_cov(x, y, cx, cy - ry * 0.55, rx * 1.02, ry * 0.62, 1.5 * s);
      cov *= clamp01(0.5 + (id.hair_cut * s + jy - y) / (2.0 * s));
      blend(x, y, cov, id.hair_value);
    }
  }
  // brows
  for (const double side : {-1.0, 1.0}) {
    const double bx = cx + side * id.eye_dx * s;
    const double by = cy + (id.brow_y - id.cy) * s;
    for (int y = 0; y < raster; ++y) {
      for (int x = 0; x < raster; ++x) {
        const double yy = y + id.brow_tilt * side * (x - bx);
        blend(x, y, ellipse_cov(x, yy, bx, by, id.brow_len * s, id.brow_th * s, 0.9 * s),
              id.brow_value);
      }
    }
  }
  // eyes
  for (const double side : {-1.0, 1.0}) {
    const double exc = cx + side * id.eye_dx * s;
    const double eyc = cy + (id.eye_y - id.cy) * s;
    for (int y = 0; y < raster; ++y) {
      for (int x = 0; x < raster; ++x) {
        blend(x, y, ellipse_cov(x, y, exc, eyc, id.eye_rx * s, id.eye_ry * s, 0.8 * s), 220.0);
        const double ir = std::min(1.8, 0.8 * id.eye_ry) * s;
        blend(x, y, ellipse_cov(x, y, exc, eyc, ir, ir, 0.7 * s), id.iris);
      }
    }
  }
  // nose
  const double ntop = cy + (28.0 - id.cy) * s;
  const double nbot = ntop + id.nose_len * s;
  for (int y = 0; y < raster; ++y) {
    if (y < ntop - 1 || y > nbot + 1) continue;
    const double t = clamp01((y - ntop) / (nbot - ntop));
    const double half = 0.6 * s + id.nose_w * s * t;
    for (int x = 0; x < raster; ++x) {
      double cov = clamp01(0.5 + (half - std::fabs(x - cx)) / (1.0 * s));
      cov *= clamp01(0.5 + std::min(y - ntop, nbot - y) / (1.2 * s));
      blend(x, y, cov * 0.85, id.skin * id.nose_value);
    }
  }
  // mouth
  const double myc = cy + (id.mouth_y - id.cy) * s;
  for (int y = 0; y < raster; ++y) {
    for (int x = 0; x < raster; ++x) {
      const double bend = id.mouth_curve * s * std::pow((x - cx) / (id.mouth_rx * s), 2.0);
      blend(x, y, ellipse_cov(x, y - bend, cx, myc, id.mouth_rx * s, id.mouth_ry * s, 0.9 * s),
            id.mouth_value);
    }
  }

  // illumination gradient, brightness offset, sensor noise
  FaceImage img(raster, raster);
  for (int y = 0; y < raster; ++y) {
    for (int x = 0; x < raster; ++x) {
      double v = buf[static_cast<std::size_t>(y) * raster + x];
      v += grad * (x - raster / 2.0) / raster + offset;
      v += noise_sigma * normal(img_rng);
      img.at(x, y) = quantize(v);
    }
  }
  return img;
}

}  // namespace

void gen_gallery(int identities, int enrolled_per_identity, int heldout_per_identity,
                 std::uint64_t seed, const std::filesystem::path& out_dir, int raster) {
  if (identities < 1 || enrolled_per_identity < 1 || heldout_per_identity < 0) {
    throw ConfigError("gallery needs at least one identity and one enrolled image");
  }
  const std::filesystem::path gal = out_dir / "gallery";
  const std::filesystem::path held = out_dir / "heldout";
  std::filesystem::create_directories(gal);
  if (heldout_per_identity > 0) std::filesystem::create_directories(held);

  for (int i = 0; i < identities; ++i) {
    char name[8];
    std::snprintf(name, sizeof name, "id%02d", i);
    Rng id_rng(derive_seed(seed, 0x1D000000ULL + static_cast<std::uint64_t>(i)));
    const IdentityParams params = draw_identity(id_rng);
    std::filesystem::create_directories(gal / name);
    for (int j = 0; j < enrolled_per_identity; ++j) {
      Rng img_rng(derive_seed(seed, 0x2A000000ULL + static_cast<std::uint64_t>(i) * 977 + j));
      // enrollment quality ladder: later images are noisier, like a mixed
      // collection of real photos
      const double sigma = 1.0 + 1.5 * (j % 4);
      const FaceImage img = render_identity_image(params, img_rng, sigma, raster);
      write_pgm(img, gal / name / (std::to_string(j) + ".pgm"));
    }
    if (heldout_per_identity > 0) std::filesystem::create_directories(held / name);
    for (int j = 0; j < heldout_per_identity; ++j) {
      Rng img_rng(derive_seed(seed, 0x3B000000ULL + static_cast<std::uint64_t>(i) * 977 + j));
      const FaceImage img = render_identity_image(params, img_rng, 1.0, raster);
      write_pgm(img, held / name / (std::to_string(j) + ".pgm"));
    }
  }
}

}  // namespace facesim
