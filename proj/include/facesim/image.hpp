#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace facesim {

// Fixed-size 8-bit grayscale raster; the common currency of every module.
// Pixels are row-major, length == width * height.
struct FaceImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  FaceImage() = default;
  FaceImage(int w, int h, std::uint8_t fill = 0);

  std::size_t size() const { return pixels.size(); }
  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool same_dims(const FaceImage& other) const {
    return width == other.width && height == other.height;
  }
  bool operator==(const FaceImage& other) const = default;
};

// Binary PGM (P5), 8-bit, maxval 255.
FaceImage read_pgm(const std::filesystem::path& path);
void write_pgm(const FaceImage& img, const std::filesystem::path& path);

// Pixel values as doubles in [0, 255].
std::vector<double> to_vector(const FaceImage& img);
FaceImage from_vector(const std::vector<double>& v, int width, int height);

// Hex SHA-256 of the raw pixel buffer; used for ledger probe hashes.
std::string sha256_hex(const FaceImage& img);

}  // namespace facesim
