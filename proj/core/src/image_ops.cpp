#include "gaminv/image_ops.hpp"

#include <cmath>

#include "gaminv/error.hpp"
#include "gaminv/parallel.hpp"

namespace gaminv {

ScalarField convolve(const ScalarField& img, const Kernel& kern) {
  const int k = kern.size();
  const int r = kern.radius();
  if (img.width() < k || img.height() < k) {
    throw InputError("convolve: image (" + std::to_string(img.width()) + "x" +
                     std::to_string(img.height()) + ") smaller than " + std::to_string(k) +
                     "x" + std::to_string(k) + " kernel");
  }
  if (img.has_mask()) throw InputError("convolve: masked inputs are not supported");

  ScalarField out(img.width(), img.height());
  const int m = img.margin() + r;
  out.set_margin(m);
  const int w = img.width();
  const int h = img.height();
  if (2 * m >= w || 2 * m >= h) return out;

  const std::vector<double>& taps = kern.taps();
  parallel_for(m, h - m, [&](int y) {
    std::span<double> dst = out.row(y);
    for (int x = m; x < w - m; ++x) {
      double acc = 0.0;
      // Tap (ox, oy) meets sample (x - ox, y - oy); walk taps in row-major order.
      for (int oy = -r; oy <= r; ++oy) {
        std::span<const double> src = img.row(y - oy);
        const double* trow = &taps[static_cast<std::size_t>(oy + r) * k];
        for (int ox = -r; ox <= r; ++ox) {
          acc += trow[ox + r] * src[x - ox];
        }
      }
      dst[x] = acc;
    }
  });
  return out;
}

DerivativeJet derivative_jet(const ScalarField& img, const FilterScale& scale, int max_order) {
  auto filt = [&](int dx, int dy) {
    return convolve(img, gaussian_kernel(scale.sigma, scale.kernel_size, {dx, dy}));
  };
  DerivativeJet jet;
  jet.dx = filt(1, 0);
  jet.dy = filt(0, 1);
  if (max_order >= 2) {
    jet.dxx = filt(2, 0);
    jet.dxy = filt(1, 1);
    jet.dyy = filt(0, 2);
  }
  if (max_order >= 3) {
    jet.dxxx = filt(3, 0);
    jet.dxxy = filt(2, 1);
    jet.dxyy = filt(1, 2);
    jet.dyyy = filt(0, 3);
  }
  return jet;
}

namespace {

ScalarField like(const ScalarField& f) {
  ScalarField out(f.width(), f.height());
  out.set_margin(f.margin());
  return out;
}

void require(const ScalarField& f, const char* what) {
  if (f.empty()) throw InputError(std::string("derivative jet lacks ") + what);
}

}  // namespace

ScalarField gradient_magnitude(const DerivativeJet& jet) {
  ScalarField out = like(jet.dx);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double gx = jet.dx.samples()[i], gy = jet.dy.samples()[i];
    out.samples()[i] = std::sqrt(gx * gx + gy * gy);
  }
  return out;
}

ScalarField laplacian(const DerivativeJet& jet) {
  require(jet.dxx, "second order");
  ScalarField out = like(jet.dxx);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.samples()[i] = jet.dxx.samples()[i] + jet.dyy.samples()[i];
  }
  return out;
}

ScalarField quadratic_variation(const DerivativeJet& jet) {
  require(jet.dxx, "second order");
  ScalarField out = like(jet.dxx);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double xx = jet.dxx.samples()[i], xy = jet.dxy.samples()[i], yy = jet.dyy.samples()[i];
    out.samples()[i] = std::sqrt(xx * xx + 2.0 * xy * xy + yy * yy);
  }
  return out;
}

ScalarField cubic_variation(const DerivativeJet& jet) {
  require(jet.dxxx, "third order");
  ScalarField out = like(jet.dxxx);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = jet.dxxx.samples()[i], b = jet.dxxy.samples()[i];
    const double c = jet.dxyy.samples()[i], d = jet.dyyy.samples()[i];
    out.samples()[i] = std::sqrt(a * a + 3.0 * b * b + 3.0 * c * c + d * d);
  }
  return out;
}

ScalarField gradient_magnitude(const ScalarField& img, const FilterScale& scale) {
  return gradient_magnitude(derivative_jet(img, scale, 1));
}

ScalarField laplacian(const ScalarField& img, const FilterScale& scale) {
  return laplacian(derivative_jet(img, scale, 2));
}

ScalarField quadratic_variation(const ScalarField& img, const FilterScale& scale) {
  return quadratic_variation(derivative_jet(img, scale, 2));
}

ScalarField cubic_variation(const ScalarField& img, const FilterScale& scale) {
  return cubic_variation(derivative_jet(img, scale, 3));
}

}  // namespace gaminv
