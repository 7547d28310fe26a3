#include "facesim/image.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "facesim/error.hpp"

namespace facesim {

FaceImage::FaceImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw ImageError("image dimensions must be positive");
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

namespace {

// Skips whitespace and '#' comment lines between PGM header tokens.
int next_header_int(std::istream& in, const std::filesystem::path& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c)) {
    throw ManifestError("malformed PGM header in " + path.string());
  }
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    c = in.get();
  }
  if (c != EOF) in.unget();
  return value;
}

}  // namespace

FaceImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open image file " + path.string());
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5') {
    throw ManifestError("not a binary PGM (P5): " + path.string());
  }
  const int w = next_header_int(in, path);
  const int h = next_header_int(in, path);
  const int maxval = next_header_int(in, path);
  if (w <= 0 || h <= 0) throw ManifestError("non-positive PGM dimensions in " + path.string());
  if (maxval != 255) throw ManifestError("PGM maxval must be 255 in " + path.string());
  in.get();  // single whitespace after maxval
  FaceImage img(w, h);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.size())) {
    throw ManifestError("truncated PGM pixel data in " + path.string());
  }
  return img;
}

void write_pgm(const FaceImage& img, const std::filesystem::path& path) {
  if (img.width <= 0 || img.height <= 0 ||
      img.pixels.size() != static_cast<std::size_t>(img.width) * img.height) {
    throw ImageError("refusing to write malformed image " + path.string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError("cannot write image file " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.size()));
  if (!out) throw ManifestError("I/O failure writing " + path.string());
}

std::vector<double> to_vector(const FaceImage& img) {
  return std::vector<double>(img.pixels.begin(), img.pixels.end());
}

FaceImage from_vector(const std::vector<double>& v, int width, int height) {
  if (v.size() != static_cast<std::size_t>(width) * height) {
    throw ImageError("vector length does not match image dimensions");
  }
  FaceImage img(width, height);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = std::lround(v[i]);
    img.pixels[i] = static_cast<std::uint8_t>(x < 0 ? 0 : (x > 255 ? 255 : x));
  }
  return img;
}

std::string sha256_hex(const FaceImage& img) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(img.pixels.data(), img.pixels.size(), digest, &len, EVP_sha256(), nullptr)) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace facesim
