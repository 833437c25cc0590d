#pragma once

// Exact 1-d invariants under gamma correction (and scaling) for a closed-form
// signal family. Serves as ground truth for the sampled 2-d implementation.

#include <vector>

namespace gaminv::analytic {

/// Value and first three derivatives of a signal at one point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Closed-form signal f(x) = a * x * sin(2*pi*c*x) + b, optionally composed
/// with a scale substitution x -> alpha*x and a gamma map v -> p * v^gamma.
///
/// Wrappers compose in the order they are applied: `base.with_scale(2).with_gamma(0.45)`
/// evaluates p * f(2x)^0.45. Derivatives are propagated exactly by the chain rule.
class AnalyticSignal {
 public:
  /// The family a*x*sin(2*pi*c*x) + b. `frequency` is c.
  static AnalyticSignal sine_ramp(double a = 3.0, double b = 30.0, double frequency = 1.0);
  static AnalyticSignal constant(double b) { return sine_ramp(0.0, b); }

  /// p * f^gamma with p = white^(1 - gamma), so `white` is a fixed point.
  AnalyticSignal with_gamma(double gamma, double white = 255.0) const;
  /// p * f^gamma with an explicit normalisation factor.
  AnalyticSignal with_gamma_factor(double gamma, double p) const;
  /// g(alpha * x).
  AnalyticSignal with_scale(double alpha) const;

  Jet eval(double x) const;

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double frequency() const noexcept { return c_; }

 private:
  struct Stage {
    enum class Kind { gamma, scale } kind;
    double gamma = 1.0;
    double p = 1.0;
    double alpha = 1.0;
  };

  AnalyticSignal(double a, double b, double c) : a_(a), b_(b), c_(c) {}

  Jet eval_base(double x) const;

  double a_;
  double b_;
  double c_;
  std::vector<Stage> stages_;
};

/// Power-law map applied to a jet: returns the jet of p * v^gamma.
Jet apply_gamma(const Jet& j, double gamma, double p);

/// Absolute tolerance for the zero tests in the modified invariants.
inline constexpr double kZeroTolerance = 1e-12;

// Theta_12g = f f' / (f f'' - f'^2). Throws PoleError if the denominator is 0.
double theta_12g(const Jet& j);
double theta_12g(const AnalyticSignal& f, double x);

/// Bounded variant: 0 when numerator and denominator both vanish, otherwise
/// whichever of N/D and D/N has magnitude <= 1.
double theta_m12g(const Jet& j, double zero_tol = kZeroTolerance);
double theta_m12g(const AnalyticSignal& f, double x);

// Theta_123g, invariant under gamma and scaling:
//   (g^2 g' g''' - 3 g g'^2 g'' + 2 g'^4) / (g^2 g''^2 - 2 g g'^2 g'' + g'^4)
double theta_123g(const Jet& j);
double theta_123g(const AnalyticSignal& f, double x);

double theta_m123g(const Jet& j, double zero_tol = kZeroTolerance);
double theta_m123g(const AnalyticSignal& f, double x);

/// Numerator and denominator of the two invariants, exposed for diagnostics.
struct Ratio {
  double numerator;
  double denominator;
};
Ratio ratio_12g(const Jet& j);
Ratio ratio_123g(const Jet& j);

/// Clamp rule shared by the modified invariants.
double bounded_ratio(double numerator, double denominator, double zero_tol);

/// Roots of f f'' - f'^2 in [lo, hi], located by scanning `samples` intervals
/// for sign changes and refining each by bisection. The Theta_123g denominator
/// is the square of this expression, so these are the poles of both invariants.
std::vector<double> denominator_roots(const AnalyticSignal& f, double lo, double hi,
                                      int samples = 20000);

/// `count` evenly spaced points over [lo, hi] with every point closer than
/// `exclusion` to a denominator root removed.
std::vector<double> pole_free_grid(const AnalyticSignal& f, double lo, double hi, int count,
                                   double exclusion = 1e-3);

}  // namespace gaminv::analytic
