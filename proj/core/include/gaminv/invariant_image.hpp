#pragma once

#include <string>
#include <string_view>

#include "gaminv/image_ops.hpp"
#include "gaminv/scalar_field.hpp"

namespace gaminv {

enum class InvariantKind {
  m12g,   ///< gamma invariant from first and second derivatives
  m123g,  ///< gamma and scale invariant, adds third derivatives
};

/// How image derivatives enter the invariant.
enum class DerivativeRoute {
  /// Filter L = ln I and form |grad L| / lap L (resp. |grad L| CV(L) / (lap L)^2).
  /// A gamma change adds ln p and multiplies L by gamma, both of which drop out
  /// of the sampled ratio, so the map is gamma invariant on float data.
  log_domain,
  /// Filter I itself and use I |grad I| / (I lap I - |grad I|^2) and the
  /// expanded third-order form. Equal in the continuum, but the sampled filters
  /// do not commute with the power law.
  direct,
};

std::string_view to_string(InvariantKind kind);
std::string_view to_string(DerivativeRoute route);
/// Accepts "m12g"/"m123g" and "log"/"direct"; throws InputError otherwise.
InvariantKind parse_invariant_kind(std::string_view s);
DerivativeRoute parse_derivative_route(std::string_view s);

/// Relative tolerance of the case tests: a quantity counts as zero when it is
/// at most kCaseTolerance * max(|N|, |D|, 1).
inline constexpr double kCaseTolerance = 1e-9;

struct InvariantOptions {
  FilterScale derivative{1.0, 7};
  /// Gaussian prefilter applied before differentiation; 0 disables it.
  double sigma_pre = 0.0;
  DerivativeRoute route = DerivativeRoute::log_domain;
  /// Intensities are clamped to at least this value before anything else.
  /// 1 for 8-bit data; use a tiny positive value for float data.
  double intensity_floor = 1.0;
  double case_tolerance = kCaseTolerance;
};

/// Per-pixel invariant together with the quantities it was formed from.
struct InvariantMap {
  InvariantKind kind = InvariantKind::m12g;
  DerivativeRoute route = DerivativeRoute::log_domain;
  double sigma_der = 1.0;
  double sigma_pre = 0.0;
  /// Invariant values, in [-1, 1] at every valid pixel.
  ScalarField values;
  /// Numerator and denominator that entered the case analysis.
  ScalarField numerator;
  ScalarField denominator;
  /// I lap I - |grad I|^2 in intensity units (I^2 lap L on the log route).
  /// The third-order denominator is its square; used to flag poorly
  /// conditioned pixels.
  ScalarField curvature;

  int margin() const noexcept { return values.margin(); }
};

/// I_gamma = p * I^gamma with p = white^(1 - gamma). With `requantize` the
/// result is rounded to the nearest integer and clamped to [0, white].
/// Throws InputError on negative samples or non-positive gamma/white.
ScalarField gamma_correct(const ScalarField& img, double gamma, double white = 255.0,
                          bool requantize = false);

/// Convolution with the unit-sum Gaussian of scale sigma_pre (support
/// default_kernel_size(sigma_pre)). sigma_pre == 0 returns the input unchanged.
ScalarField prefilter(const ScalarField& img, double sigma_pre);

InvariantMap compute_invariant(const ScalarField& img, InvariantKind kind,
                               const InvariantOptions& options = {});

inline InvariantMap invariant_m12g(const ScalarField& img, const InvariantOptions& options = {}) {
  return compute_invariant(img, InvariantKind::m12g, options);
}
inline InvariantMap invariant_m123g(const ScalarField& img, const InvariantOptions& options = {}) {
  return compute_invariant(img, InvariantKind::m123g, options);
}

/// Mask of valid pixels whose |curvature| exceeds tau (the pole filter used
/// when reporting invariance). Same shape as the map.
std::vector<std::uint8_t> well_conditioned(const InvariantMap& map, double tau);

/// Conditioning threshold 1e-4 * white^2.
inline double default_conditioning_threshold(double white = 255.0) { return 1e-4 * white * white; }

}  // namespace gaminv
