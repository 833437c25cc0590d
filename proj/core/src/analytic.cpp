#include "gaminv/analytic.hpp"

#include <cmath>
#include <numbers>

#include "gaminv/error.hpp"

namespace gaminv::analytic {

AnalyticSignal AnalyticSignal::sine_ramp(double a, double b, double frequency) {
  return AnalyticSignal(a, b, frequency);
}

AnalyticSignal AnalyticSignal::with_gamma(double gamma, double white) const {
  return with_gamma_factor(gamma, std::pow(white, 1.0 - gamma));
}

AnalyticSignal AnalyticSignal::with_gamma_factor(double gamma, double p) const {
  if (!(gamma > 0.0) || !(p > 0.0)) throw InputError("gamma and p must be positive");
  AnalyticSignal out = *this;
  out.stages_.push_back({Stage::Kind::gamma, gamma, p, 1.0});
  return out;
}

AnalyticSignal AnalyticSignal::with_scale(double alpha) const {
  if (!(alpha > 0.0)) throw InputError("scale factor must be positive");
  AnalyticSignal out = *this;
  out.stages_.push_back({Stage::Kind::scale, 1.0, 1.0, alpha});
  return out;
}

Jet AnalyticSignal::eval_base(double x) const {
  const double w = 2.0 * std::numbers::pi * c_;
  const double s = std::sin(w * x);
  const double c = std::cos(w * x);
  return {
      a_ * x * s + b_,
      a_ * s + a_ * w * x * c,
      2.0 * a_ * w * c - a_ * w * w * x * s,
      -3.0 * a_ * w * w * s - a_ * w * w * w * x * c,
  };
}

Jet AnalyticSignal::eval(double x) const {
  // Scale stages act on the argument, innermost first; gamma stages act on
  // values in application order. Walk outward-in for the argument, then back.
  double arg = x;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    if (it->kind == Stage::Kind::scale) {
      arg *= it->alpha;
    }
  }
  Jet j = eval_base(arg);
  for (const Stage& st : stages_) {
    if (st.kind == Stage::Kind::scale) {
      const double a = st.alpha;
      j.d1 *= a;
      j.d2 *= a * a;
      j.d3 *= a * a * a;
    } else {
      j = apply_gamma(j, st.gamma, st.p);
    }
  }
  return j;
}

Jet apply_gamma(const Jet& j, double gamma, double p) {
  const double v = j.value;
  const double g = gamma;
  const double pv = p * std::pow(v, g - 1.0);  // p v^(g-1)
  const double inv = 1.0 / v;
  Jet out;
  out.value = pv * v;
  out.d1 = g * pv * j.d1;
  out.d2 = g * pv * ((g - 1.0) * inv * j.d1 * j.d1 + j.d2);
  out.d3 = g * pv *
           ((g - 1.0) * (g - 2.0) * inv * inv * j.d1 * j.d1 * j.d1 +
            3.0 * (g - 1.0) * inv * j.d1 * j.d2 + j.d3);
  return out;
}

Ratio ratio_12g(const Jet& j) {
  return {j.value * j.d1, j.value * j.d2 - j.d1 * j.d1};
}

Ratio ratio_123g(const Jet& j) {
  const double g = j.value, g1 = j.d1, g2 = j.d2, g3 = j.d3;
  const double g1sq = g1 * g1;
  return {
      g * g * g1 * g3 - 3.0 * g * g1sq * g2 + 2.0 * g1sq * g1sq,
      g * g * g2 * g2 - 2.0 * g * g1sq * g2 + g1sq * g1sq,
  };
}

double bounded_ratio(double numerator, double denominator, double zero_tol) {
  const double an = std::abs(numerator);
  const double ad = std::abs(denominator);
  if (an <= zero_tol && ad <= zero_tol) return 0.0;
  if (an < ad) return numerator / denominator;
  return denominator / numerator;
}

double theta_12g(const Jet& j) {
  const Ratio r = ratio_12g(j);
  if (r.denominator == 0.0) throw PoleError("theta_12g: zero denominator", 0.0);
  return r.numerator / r.denominator;
}

double theta_12g(const AnalyticSignal& f, double x) {
  const Ratio r = ratio_12g(f.eval(x));
  if (r.denominator == 0.0) throw PoleError("theta_12g: zero denominator", x);
  return r.numerator / r.denominator;
}

double theta_m12g(const Jet& j, double zero_tol) {
  const Ratio r = ratio_12g(j);
  return bounded_ratio(r.numerator, r.denominator, zero_tol);
}

double theta_m12g(const AnalyticSignal& f, double x) { return theta_m12g(f.eval(x)); }

double theta_123g(const Jet& j) {
  const Ratio r = ratio_123g(j);
  if (r.denominator == 0.0) throw PoleError("theta_123g: zero denominator", 0.0);
  return r.numerator / r.denominator;
}

double theta_123g(const AnalyticSignal& f, double x) {
  const Ratio r = ratio_123g(f.eval(x));
  if (r.denominator == 0.0) throw PoleError("theta_123g: zero denominator", x);
  return r.numerator / r.denominator;
}

double theta_m123g(const Jet& j, double zero_tol) {
  const Ratio r = ratio_123g(j);
  return bounded_ratio(r.numerator, r.denominator, zero_tol);
}

double theta_m123g(const AnalyticSignal& f, double x) { return theta_m123g(f.eval(x)); }

std::vector<double> denominator_roots(const AnalyticSignal& f, double lo, double hi,
                                      int samples) {
  if (!(hi > lo) || samples < 1) throw InputError("denominator_roots: empty interval");
  auto den = [&](double x) { return ratio_12g(f.eval(x)).denominator; };

  std::vector<double> roots;
  const double step = (hi - lo) / samples;
  double x0 = lo;
  double d0 = den(x0);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = (i == samples) ? hi : lo + i * step;
    const double d1 = den(x1);
    if (d0 == 0.0) {
      roots.push_back(x0);
    } else if ((d0 < 0.0) != (d1 < 0.0) && d1 != 0.0) {
      double a = x0, b = x1, da = d0;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double dm = den(m);
        if (dm == 0.0) {
          a = b = m;
          break;
        }
        if ((dm < 0.0) == (da < 0.0)) {
          a = m;
          da = dm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    d0 = d1;
  }
  if (d0 == 0.0) roots.push_back(x0);
  return roots;
}

std::vector<double> pole_free_grid(const AnalyticSignal& f, double lo, double hi, int count,
                                   double exclusion) {
  if (count < 2) throw InputError("pole_free_grid: need at least two points");
  const std::vector<double> roots = denominator_roots(f, lo, hi);
  std::vector<double> grid;
  grid.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double x = lo + (hi - lo) * i / (count - 1);
    bool near_pole = false;
    for (double r : roots) {
      if (std::abs(x - r) <= exclusion) {
        near_pole = true;
        break;
      }
    }
    if (!near_pole) grid.push_back(x);
  }
  return grid;
}

}  // namespace gaminv::analytic
