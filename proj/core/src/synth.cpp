#include "gaminv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaminv/error.hpp"
#include "gaminv/image_ops.hpp"
#include "gaminv/kernels.hpp"

namespace gaminv {

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::gaussians: return "gaussians";
    case SynthKind::ripple: return "ripple";
    case SynthKind::checker_blur: return "checker-blur";
  }
  return "?";
}

SynthKind parse_synth_kind(std::string_view s) {
  if (s == "gaussians") return SynthKind::gaussians;
  if (s == "ripple") return SynthKind::ripple;
  if (s == "checker-blur" || s == "checker_blur") return SynthKind::checker_blur;
  throw InputError("unknown synthetic image kind '" + std::string(s) +
                   "' (expected gaussians, ripple or checker-blur)");
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
  // xoshiro256**
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

namespace {

// Gaussian blur of a full frame: blur a reflect-padded copy and crop, so the
// result has no invalid margin.
ScalarField blur_full(const ScalarField& f, double sigma) {
  const Kernel k = gaussian_kernel(sigma, default_kernel_size(sigma), {0, 0});
  const int r = k.radius();
  const int w = f.width(), h = f.height();
  ScalarField padded(w + 2 * r, h + 2 * r);
  auto reflect = [](int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
    return i;
  };
  for (int y = 0; y < padded.height(); ++y) {
    for (int x = 0; x < padded.width(); ++x) {
      padded(x, y) = f(reflect(x - r, w), reflect(y - r, h));
    }
  }
  const ScalarField blurred = convolve(padded, k);
  ScalarField out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out(x, y) = blurred(x + r, y + r);
  }
  return out;
}

void normalize_to_range(ScalarField& f, double lo, double hi) {
  const auto [mn, mx] = std::minmax_element(f.samples().begin(), f.samples().end());
  const double a = *mn, b = *mx;
  for (double& v : f.samples()) v = b > a ? lo + (hi - lo) * (v - a) / (b - a) : 0.5 * (lo + hi);
}

ScalarField gaussians(Rng& rng, int w, int h) {
  // Dense untruncated blobs: every region carries texture, so 8-bit
  // quantisation leaves no flat patches.
  ScalarField f(w, h);
  const int blobs = std::max(8, w * h / 150);
  for (int n = 0; n < blobs; ++n) {
    const double cx = rng.uniform(0.0, w), cy = rng.uniform(0.0, h);
    const double s = rng.uniform(3.0, 10.0);
    const double a = rng.uniform(-1.0, 1.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dx = x - cx, dy = y - cy;
        f(x, y) += a * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
      }
    }
  }
  return f;
}

ScalarField ripple(Rng& rng, int w, int h) {
  // Radial analogue of x*sin(2*pi*x) with wavelength `lambda` pixels.
  const double cx = rng.uniform(0.3, 0.7) * w;
  const double cy = rng.uniform(0.3, 0.7) * h;
  const double lambda = rng.uniform(14.0, 20.0);
  ScalarField f(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double r = std::hypot(x - cx, y - cy) / lambda;
      f(x, y) = 3.0 * r * std::sin(2.0 * std::numbers::pi * r) + 30.0;
    }
  }
  return f;
}

ScalarField checker_blur(Rng& rng, int w, int h) {
  const int cell = 6 + static_cast<int>(rng.next() % 4);
  const int ox = static_cast<int>(rng.next() % cell), oy = static_cast<int>(rng.next() % cell);
  const int cols = (w + ox) / cell + 1, rows = (h + oy) / cell + 1;
  std::vector<double> cells(static_cast<std::size_t>(cols) * rows);
  for (double& c : cells) c = rng.uniform();
  ScalarField f(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f(x, y) = cells[((y + oy) / cell) * cols + (x + ox) / cell];
  }
  return blur_full(f, 1.5);
}

}  // namespace

ScalarField synth_image(SynthKind kind, std::uint64_t seed, int width, int height) {
  if (width < 8 || height < 8) throw InputError("synthetic images must be at least 8x8");
  Rng rng(seed ^ (static_cast<std::uint64_t>(kind) << 56));
  ScalarField f;
  switch (kind) {
    case SynthKind::gaussians: f = gaussians(rng, width, height); break;
    case SynthKind::ripple: f = ripple(rng, width, height); break;
    case SynthKind::checker_blur: f = checker_blur(rng, width, height); break;
  }
  normalize_to_range(f, 1.0, 255.0);
  return f;
}

}  // namespace gaminv
