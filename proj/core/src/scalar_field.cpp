#include "gaminv/scalar_field.hpp"

#include <cmath>
#include <string>

#include "gaminv/error.hpp"

namespace gaminv {

ScalarField::ScalarField(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw InputError("field dimensions must be positive");
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

ScalarField::ScalarField(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width <= 0 || height <= 0) throw InputError("field dimensions must be positive");
  if (samples_.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("sample count does not match field dimensions");
  }
}

void ScalarField::set_margin(int m) {
  if (m < 0) throw InputError("margin must be non-negative");
  margin_ = m;
}

void ScalarField::set_mask(std::vector<std::uint8_t> mask) {
  if (mask.size() != samples_.size()) throw InputError("mask size does not match field");
  mask_ = std::move(mask);
}

std::size_t ScalarField::count_valid() const {
  std::size_t n = 0;
  for (int y = margin_; y < height_ - margin_; ++y) {
    for (int x = margin_; x < width_ - margin_; ++x) {
      if (mask_.empty() || mask_[index(x, y)] != 0) ++n;
    }
  }
  return n;
}

void ScalarField::check_finite(const char* context) const {
  for (double v : samples_) {
    if (!std::isfinite(v)) {
      throw InvariantViolation(std::string(context) + ": non-finite sample");
    }
  }
}

void ScalarField::zero_invalid() {
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (!is_valid(x, y)) samples_[index(x, y)] = 0.0;
    }
  }
}

ScalarField rotate90(const ScalarField& f) {
  // Output is H wide and W tall; output(x', y') = f(W-1-y', x').
  ScalarField out(f.height(), f.width());
  for (int yo = 0; yo < out.height(); ++yo) {
    for (int xo = 0; xo < out.width(); ++xo) {
      out(xo, yo) = f(f.width() - 1 - yo, xo);
    }
  }
  out.set_margin(f.margin());
  if (f.has_mask()) {
    std::vector<std::uint8_t> m(out.size());
    for (int yo = 0; yo < out.height(); ++yo) {
      for (int xo = 0; xo < out.width(); ++xo) {
        m[out.index(xo, yo)] = f.mask()[f.index(f.width() - 1 - yo, xo)];
      }
    }
    out.set_mask(std::move(m));
  }
  return out;
}

}  // namespace gaminv
