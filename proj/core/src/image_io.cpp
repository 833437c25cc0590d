#include "gaminv/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "gaminv/error.hpp"

namespace gaminv::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// PGM

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& s) : s_(s) {}

  // Next whitespace-delimited token, skipping '#' comments to end of line.
  std::string token() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  int positive_int(const char* what) {
    const std::string t = token();
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        t.size() > 9) {
      throw InputError(std::string("PGM: malformed ") + what);
    }
    const int v = std::stoi(t);
    if (v <= 0) throw InputError(std::string("PGM: ") + what + " must be positive");
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= s_.size() || !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      throw InputError("PGM: truncated header");
    }
    return pos_ + 1;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
  HeaderReader hr(bytes);
  const std::string magic = hr.token();
  if (magic != "P5") throw InputError("PGM: expected binary 'P5' magic, got '" + magic + "'");
  GrayImage img;
  img.width = hr.positive_int("width");
  img.height = hr.positive_int("height");
  const int maxval = hr.positive_int("maxval");
  if (maxval != 255) {
    throw InputError("PGM: only maxval 255 is supported (got " + std::to_string(maxval) + ")");
  }
  const std::size_t start = hr.raster_start();
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (bytes.size() < start + n) throw InputError("PGM: truncated pixel data");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                    bytes.begin() + static_cast<std::ptrdiff_t>(start + n));
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

std::string encode_pgm(const GrayImage& img) {
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height) {
    throw InvariantViolation("encode_pgm: pixel count does not match dimensions");
  }
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_file(path, encode_pgm(img));
}

// ---------------------------------------------------------------------------
// PNG

GrayImage read_png(const std::filesystem::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "rb"), &std::fclose);
  if (!fp) throw InputError("cannot open '" + path.string() + "'");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw InvariantViolation("libpng: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw InvariantViolation("libpng: cannot create info struct");
  }
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() { png_destroy_read_struct(p, i, nullptr); }
  } guard{&png, &info};

  GrayImage img;
  std::string problem;
  std::vector<png_bytep> rows;
  // libpng reports errors by longjmp; keep the protected region free of objects
  // with non-trivial destructors.
  if (setjmp(png_jmpbuf(png))) {
    throw InputError("PNG: corrupt or truncated file '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    problem = "PNG: only single-channel grayscale is supported";
  } else if (depth != 8) {
    problem = "PNG: only 8-bit samples are supported (got " + std::to_string(depth) + "-bit)";
  }
  if (!problem.empty()) throw InputError(problem);

  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.pixels.resize(static_cast<std::size_t>(w) * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * w;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  return img;
}

// ---------------------------------------------------------------------------

ScalarField to_field(const GrayImage& img) {
  std::vector<double> v(img.pixels.begin(), img.pixels.end());
  return ScalarField(img.width, img.height, std::move(v));
}

GrayImage to_gray(const ScalarField& f) {
  GrayImage img{f.width(), f.height(), std::vector<std::uint8_t>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) {
    img.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::round(f.samples()[i]), 0.0, 255.0));
  }
  return img;
}

namespace {

constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool starts_with(const std::string& bytes, const void* sig, std::size_t n) {
  return bytes.size() >= n && std::memcmp(bytes.data(), sig, n) == 0;
}

}  // namespace

ScalarField load_image(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (starts_with(bytes, kPngSignature, sizeof kPngSignature)) return to_field(read_png(path));
  if (starts_with(bytes, "P", 1)) return to_field(parse_pgm(bytes));
  throw InputError("'" + path.string() + "' is neither a PGM (P5) nor a PNG image");
}

// ---------------------------------------------------------------------------
// Float maps

namespace {

static_assert(sizeof(double) == 8);

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& s, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
  return v;
}

}  // namespace

std::string encode_map(const ScalarField& f) {
  std::string out = "GINV";
  put_u32(out, static_cast<std::uint32_t>(f.width()));
  put_u32(out, static_cast<std::uint32_t>(f.height()));
  put_u32(out, static_cast<std::uint32_t>(f.margin()));
  out.reserve(16 + 8 * f.size());
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const double v = f.is_valid(x, y) ? f(x, y) : 0.0;
      std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
  }
  return out;
}

void write_map(const std::filesystem::path& path, const ScalarField& f) {
  write_file(path, encode_map(f));
}

ScalarField decode_map(const std::string& bytes) {
  if (bytes.size() < 16 || bytes.compare(0, 4, "GINV") != 0) {
    throw InputError("float map: missing 'GINV' header");
  }
  const std::uint32_t w = get_u32(bytes, 4);
  const std::uint32_t h = get_u32(bytes, 8);
  const std::uint32_t margin = get_u32(bytes, 12);
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16)) {
    throw InputError("float map: invalid dimensions");
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() != 16 + 8 * n) throw InputError("float map: truncated or oversized data");
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[16 + 8 * k + i])) << (8 * i);
    }
    v[k] = std::bit_cast<double>(bits);
    if (!std::isfinite(v[k])) throw InputError("float map: non-finite sample");
  }
  ScalarField f(static_cast<int>(w), static_cast<int>(h), std::move(v));
  if (2 * static_cast<std::uint64_t>(margin) > std::min(w, h)) {
    throw InputError("float map: margin larger than the map");
  }
  f.set_margin(static_cast<int>(margin));
  return f;
}

ScalarField read_map(const std::filesystem::path& path) { return decode_map(read_file(path)); }

ScalarField load_field(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (starts_with(bytes, "GINV", 4)) return decode_map(bytes);
  return load_image(path);
}

GrayImage visualize(const ScalarField& f, double lo, double hi, std::uint8_t invalid_value) {
  if (!(hi > lo)) throw InputError("visualize: empty value range");
  GrayImage img{f.width(), f.height(), std::vector<std::uint8_t>(f.size(), invalid_value)};
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      if (!f.is_valid(x, y)) continue;
      const double t = (f(x, y) - lo) / (hi - lo) * 255.0;
      img.pixels[f.index(x, y)] = static_cast<std::uint8_t>(std::clamp(std::round(t), 0.0, 255.0));
    }
  }
  return img;
}

GrayImage render_mask(int width, int height, const std::vector<std::uint8_t>& mask,
                      std::uint8_t on, std::uint8_t off) {
  if (mask.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("render_mask: mask size does not match dimensions");
  }
  GrayImage img{width, height, std::vector<std::uint8_t>(mask.size())};
  for (std::size_t i = 0; i < mask.size(); ++i) img.pixels[i] = mask[i] ? on : off;
  return img;
}

}  // namespace gaminv::io
