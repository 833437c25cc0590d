#include "gaminv/kernels.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "gaminv/error.hpp"

namespace gaminv {

std::string order_name(DerivativeOrder order) {
  if (order.total() == 0) return "G";
  return "G_" + std::string(order.dx, 'x') + std::string(order.dy, 'y');
}

double gaussian_1d(double sigma, double x, int order) {
  const double s2 = sigma * sigma;
  const double g = std::exp(-x * x / (2.0 * s2)) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  switch (order) {
    case 0: return g;
    case 1: return -x / s2 * g;
    case 2: return (x * x - s2) / (s2 * s2) * g;
    case 3: return (3.0 * s2 * x - x * x * x) / (s2 * s2 * s2) * g;
    default: throw InputError("gaussian_1d: order must be in [0, 3]");
  }
}

double gaussian_derivative(double sigma, double x, double y, DerivativeOrder order) {
  const double s2 = sigma * sigma;
  const double s4 = s2 * s2;
  const double s6 = s4 * s2;
  const double g = std::exp(-(x * x + y * y) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
  const int dx = order.dx, dy = order.dy;
  if (dx == 0 && dy == 0) return g;
  if (dx == 1 && dy == 0) return -x / s2 * g;
  if (dx == 0 && dy == 1) return -y / s2 * g;
  if (dx == 2 && dy == 0) return (x * x - s2) / s4 * g;
  if (dx == 1 && dy == 1) return x * y / s4 * g;
  if (dx == 0 && dy == 2) return (y * y - s2) / s4 * g;
  if (dx == 3 && dy == 0) return (3.0 * s2 * x - x * x * x) / s6 * g;
  if (dx == 2 && dy == 1) return (s2 * y - x * x * y) / s6 * g;
  if (dx == 1 && dy == 2) return (s2 * x - x * y * y) / s6 * g;
  if (dx == 0 && dy == 3) return (3.0 * s2 * y - y * y * y) / s6 * g;
  throw InputError("gaussian_derivative: unsupported order " + order_name(order));
}

Kernel::Kernel(int size, double sigma, DerivativeOrder order, std::vector<double> taps)
    : size_(size), sigma_(sigma), order_(order), taps_(std::move(taps)) {
  if (size_ < 1 || size_ % 2 == 0) throw InputError("kernel size must be odd");
  if (taps_.size() != static_cast<std::size_t>(size_) * size_) {
    throw InputError("kernel tap count does not match size");
  }
}

double Kernel::sum() const { return std::accumulate(taps_.begin(), taps_.end(), 0.0); }

namespace {

// Point samples of the 1-d derivative of order n at offsets -r..r. Truncation
// leaves lower-order moments that the continuous filter does not have: the
// second derivative no longer sums to zero and the third derivative picks up
// a first moment, so it responds to the gradient. Those are removed by
// subtracting the matching multiple of the order n-2 filter; the order-n
// moment itself is left untouched.
std::vector<double> moment_corrected_1d(double sigma, int r, int n) {
  std::vector<double> h(2 * r + 1), base(2 * r + 1);
  for (int x = -r; x <= r; ++x) {
    h[x + r] = gaussian_1d(sigma, x, n);
    if (n >= 2) base[x + r] = gaussian_1d(sigma, x, n - 2);
  }
  if (n < 2) return h;
  // Symmetric accumulation keeps h exactly even or odd.
  double num = 0.0, den = 0.0;
  for (int x = 1; x <= r; ++x) {
    const double p = n == 2 ? 1.0 : x;
    num += p * (h[r + x] + (n == 2 ? h[r - x] : -h[r - x]));
    den += p * (base[r + x] + (n == 2 ? base[r - x] : -base[r - x]));
  }
  if (n == 2) {
    num += h[r];
    den += base[r];
  }
  const double c = num / den;
  for (int x = -r; x <= r; ++x) h[x + r] -= c * base[x + r];
  return h;
}

}  // namespace

Kernel gaussian_kernel(double sigma, int size, DerivativeOrder order) {
  if (!(sigma > 0.0)) throw InputError("kernel sigma must be positive");
  if (size < 3 || size % 2 == 0) throw InputError("kernel size must be odd and >= 3");
  if (order.dx < 0 || order.dy < 0 || order.total() > 3) {
    throw InputError("kernel derivative order must satisfy 0 <= dx + dy <= 3");
  }

  const int r = size / 2;
  std::vector<double> taps(static_cast<std::size_t>(size) * size);

  if (order.total() == 0) {
    for (int oy = -r; oy <= r; ++oy) {
      for (int ox = -r; ox <= r; ++ox) {
        taps[(oy + r) * size + (ox + r)] = gaussian_derivative(sigma, ox, oy, order);
      }
    }
    const double s = std::accumulate(taps.begin(), taps.end(), 0.0);
    for (double& t : taps) t /= s;
    // Push the rounding residue into the centre tap until the sum is exactly 1.
    const std::size_t centre = static_cast<std::size_t>(r) * size + r;
    for (int it = 0; it < 8; ++it) {
      const double residue = 1.0 - std::accumulate(taps.begin(), taps.end(), 0.0);
      if (residue == 0.0) break;
      taps[centre] += residue;
    }
    return Kernel(size, sigma, order, std::move(taps));
  }

  const std::vector<double> hx = moment_corrected_1d(sigma, r, order.dx);
  const std::vector<double> hy = moment_corrected_1d(sigma, r, order.dy);
  for (int oy = -r; oy <= r; ++oy) {
    for (int ox = -r; ox <= r; ++ox) {
      taps[(oy + r) * size + (ox + r)] = hx[ox + r] * hy[oy + r];
    }
  }
  return Kernel(size, sigma, order, std::move(taps));
}

int default_kernel_size(double sigma) {
  if (!(sigma > 0.0)) throw InputError("sigma must be positive");
  return 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
}

}  // namespace gaminv
