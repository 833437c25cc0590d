#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gaminv {

/// Row-major 2-d grid of doubles with a validity region.
///
/// A pixel is valid when it lies at least `margin()` pixels away from every
/// border and, if a mask is attached, its mask entry is non-zero. Convolution
/// grows the margin; it never shrinks. Samples are always finite; invalid
/// pixels hold 0.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int width, int height, double fill = 0.0);
  ScalarField(int width, int height, std::vector<double> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  double operator()(int x, int y) const { return samples_[index(x, y)]; }
  double& operator()(int x, int y) { return samples_[index(x, y)]; }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> row(int y) const noexcept {
    return std::span<const double>(samples_).subspan(index(0, y), width_);
  }
  std::span<double> row(int y) noexcept {
    return std::span<double>(samples_).subspan(index(0, y), width_);
  }

  int margin() const noexcept { return margin_; }
  void set_margin(int m);

  bool has_mask() const noexcept { return !mask_.empty(); }
  /// Attaches a per-pixel validity mask (non-zero = valid). Size must match.
  void set_mask(std::vector<std::uint8_t> mask);
  void clear_mask() { mask_.clear(); }
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }

  bool in_margin(int x, int y) const noexcept {
    return x >= margin_ && y >= margin_ && x < width_ - margin_ && y < height_ - margin_;
  }
  bool is_valid(int x, int y) const noexcept {
    return in_margin(x, y) && (mask_.empty() || mask_[index(x, y)] != 0);
  }
  std::size_t count_valid() const;

  /// Throws InvariantViolation if any sample is NaN or infinite.
  void check_finite(const char* context) const;

  bool same_shape(const ScalarField& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  /// Zeroes every invalid pixel.
  void zero_invalid();

 private:
  int width_ = 0;
  int height_ = 0;
  int margin_ = 0;
  std::vector<double> samples_;
  std::vector<std::uint8_t> mask_;
};

/// Pixelwise f(a) over the whole grid; margin and mask are copied from `a`.
template <typename F>
ScalarField map_field(const ScalarField& a, F&& f) {
  ScalarField out = a;
  for (double& v : out.samples()) v = f(v);
  return out;
}

/// Rotates the grid by 90 degrees counter-clockwise (x, y) -> (y, W-1-x).
ScalarField rotate90(const ScalarField& f);

}  // namespace gaminv
