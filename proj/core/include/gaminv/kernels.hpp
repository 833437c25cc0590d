#pragma once

#include <array>
#include <string>
#include <vector>

namespace gaminv {

/// Partial derivative order of a 2-d Gaussian filter, dx + dy <= 3.
struct DerivativeOrder {
  int dx = 0;
  int dy = 0;

  int total() const noexcept { return dx + dy; }
  friend bool operator==(const DerivativeOrder&, const DerivativeOrder&) = default;
};

/// The nine partials of order 1..3, in the order G_x, G_y, G_xx, G_xy, G_yy,
/// G_xxx, G_xxy, G_xyy, G_yyy.
inline constexpr std::array<DerivativeOrder, 9> kDerivativeOrders = {{
    {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3},
}};

/// "G", "G_x", "G_xyy", ...
std::string order_name(DerivativeOrder order);

/// Closed-form partial derivative of the zero-mean isotropic 2-d Gaussian at (x, y).
double gaussian_derivative(double sigma, double x, double y, DerivativeOrder order);

/// 1-d Gaussian (order 0) and its derivatives up to order 3 at x. The 2-d
/// partials factor as gaussian_1d(x, dx) * gaussian_1d(y, dy).
double gaussian_1d(double sigma, double x, int order);

/// Square filter with odd size and the anchor at the centre tap.
class Kernel {
 public:
  Kernel(int size, double sigma, DerivativeOrder order, std::vector<double> taps);

  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  double sigma() const noexcept { return sigma_; }
  DerivativeOrder order() const noexcept { return order_; }

  /// Tap at offset (ox, oy) from the centre, |ox|, |oy| <= radius().
  double at(int ox, int oy) const { return taps_[(oy + radius()) * size_ + (ox + radius())]; }
  const std::vector<double>& taps() const noexcept { return taps_; }
  double sum() const;

 private:
  int size_;
  double sigma_;
  DerivativeOrder order_;
  std::vector<double> taps_;
};

/// Sampled Gaussian kernel of the given derivative order.
///
/// The smoothing kernel (order 0,0) holds point samples of the 2-d Gaussian
/// rescaled to unit sum. Derivative kernels are outer products of 1-d point
/// samples; the second- and third-order 1-d factors have the lower-order
/// moments that truncation introduces projected out (sum of the second
/// derivative, first moment of the third), so every derivative kernel
/// annihilates constants and a third-order kernel ignores the gradient.
/// Nothing is rescaled: the leading moment of each order is that of the raw
/// samples.
///
/// Throws InputError for even or too small size, non-positive sigma, or order > 3.
Kernel gaussian_kernel(double sigma, int size, DerivativeOrder order);

/// Default support for a Gaussian of scale sigma: 2*ceil(3 sigma) + 1 (7 at sigma 1).
int default_kernel_size(double sigma);

}  // namespace gaminv
