#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gaminv/scalar_field.hpp"

namespace gaminv::io {

/// 8-bit single-channel raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  ///< row-major
};

/// Binary PGM (P5) with maxval 255. Header comments are skipped. Throws
/// InputError on any other variant, a malformed header or truncated data.
GrayImage read_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);

/// Writes "P5\n<w> <h>\n255\n" followed by the raw pixels.
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
std::string encode_pgm(const GrayImage& img);

/// 8-bit grayscale PNG without alpha. Other bit depths and colour types are rejected.
GrayImage read_png(const std::filesystem::path& path);

/// PGM or PNG by signature, promoted to doubles in [0, 255] with margin 0.
ScalarField load_image(const std::filesystem::path& path);

/// Rounds to the nearest integer and clamps to [0, 255].
GrayImage to_gray(const ScalarField& f);
ScalarField to_field(const GrayImage& img);

// Float map file: 16-byte header (magic "GINV", u32 width, u32 height, u32 margin)
// followed by width * height little-endian IEEE doubles, row-major.

void write_map(const std::filesystem::path& path, const ScalarField& f);
std::string encode_map(const ScalarField& f);
ScalarField read_map(const std::filesystem::path& path);
ScalarField decode_map(const std::string& bytes);

/// Either a float map or an image, detected by signature.
ScalarField load_field(const std::filesystem::path& path);

/// Linear map of [lo, hi] onto [0, 255]; invalid pixels are written as `invalid_value`.
GrayImage visualize(const ScalarField& f, double lo, double hi, std::uint8_t invalid_value = 0);

/// Binary mask rendered as `on` where set and `off` elsewhere.
GrayImage render_mask(int width, int height, const std::vector<std::uint8_t>& mask,
                      std::uint8_t on, std::uint8_t off);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace gaminv::io
