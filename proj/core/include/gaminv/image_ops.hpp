#pragma once

#include "gaminv/kernels.hpp"
#include "gaminv/scalar_field.hpp"

namespace gaminv {

/// Gaussian derivative filter settings shared by the differential operators.
struct FilterScale {
  double sigma = 1.0;
  int kernel_size = 7;
};

/// Discrete convolution out(p) = sum_o k(o) * img(p - o) over the k x k support.
///
/// Only pixels whose whole support lies inside the input's valid margin are
/// computed; the output margin is the input margin plus the kernel radius and
/// everything outside it is 0. Throws InputError when the image is smaller
/// than the kernel or carries a per-pixel mask.
ScalarField convolve(const ScalarField& img, const Kernel& kern);

/// All Gaussian partials of an image up to third order at one scale.
struct DerivativeJet {
  ScalarField dx, dy;
  ScalarField dxx, dxy, dyy;
  ScalarField dxxx, dxxy, dxyy, dyyy;

  int margin() const noexcept { return dx.margin(); }
};

/// Convolves `img` with the nine derivative kernels. When `max_order` < 3 the
/// higher-order fields are left empty.
DerivativeJet derivative_jet(const ScalarField& img, const FilterScale& scale = {},
                             int max_order = 3);

// Rotationally symmetric operators. Each has an overload that reuses a jet.

/// sqrt(I_x^2 + I_y^2)
ScalarField gradient_magnitude(const ScalarField& img, const FilterScale& scale = {});
ScalarField gradient_magnitude(const DerivativeJet& jet);

/// I_xx + I_yy
ScalarField laplacian(const ScalarField& img, const FilterScale& scale = {});
ScalarField laplacian(const DerivativeJet& jet);

/// sqrt(I_xx^2 + 2 I_xy^2 + I_yy^2). Alternative to the Laplacian; not used by
/// the invariants.
ScalarField quadratic_variation(const ScalarField& img, const FilterScale& scale = {});
ScalarField quadratic_variation(const DerivativeJet& jet);

/// sqrt(I_xxx^2 + 3 I_xxy^2 + 3 I_xyy^2 + I_yyy^2)
ScalarField cubic_variation(const ScalarField& img, const FilterScale& scale = {});
ScalarField cubic_variation(const DerivativeJet& jet);

}  // namespace gaminv
