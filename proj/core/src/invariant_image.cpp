#include "gaminv/invariant_image.hpp"

#include <algorithm>
#include <cmath>

#include "gaminv/analytic.hpp"
#include "gaminv/error.hpp"
#include "gaminv/parallel.hpp"

namespace gaminv {

std::string_view to_string(InvariantKind kind) {
  return kind == InvariantKind::m12g ? "m12g" : "m123g";
}

std::string_view to_string(DerivativeRoute route) {
  return route == DerivativeRoute::log_domain ? "log" : "direct";
}

InvariantKind parse_invariant_kind(std::string_view s) {
  if (s == "m12g") return InvariantKind::m12g;
  if (s == "m123g") return InvariantKind::m123g;
  throw InputError("unknown invariant kind '" + std::string(s) + "' (expected m12g or m123g)");
}

DerivativeRoute parse_derivative_route(std::string_view s) {
  if (s == "log") return DerivativeRoute::log_domain;
  if (s == "direct") return DerivativeRoute::direct;
  throw InputError("unknown derivative route '" + std::string(s) + "' (expected log or direct)");
}

ScalarField gamma_correct(const ScalarField& img, double gamma, double white, bool requantize) {
  if (!(gamma > 0.0)) throw InputError("gamma must be positive");
  if (!(white > 0.0)) throw InputError("white level must be positive");
  const double p = std::pow(white, 1.0 - gamma);
  ScalarField out = img;
  for (double& v : out.samples()) {
    if (v < 0.0) throw InputError("gamma_correct: negative intensity");
    v = p * std::pow(v, gamma);
    if (requantize) v = std::clamp(std::round(v), 0.0, white);
  }
  return out;
}

ScalarField prefilter(const ScalarField& img, double sigma_pre) {
  if (sigma_pre < 0.0) throw InputError("sigma_pre must be non-negative");
  if (sigma_pre == 0.0) return img;
  return convolve(img, gaussian_kernel(sigma_pre, default_kernel_size(sigma_pre), {0, 0}));
}

namespace {

struct PixelTerms {
  double numerator;
  double denominator;
  double curvature;
};

PixelTerms log_route_terms(InvariantKind kind, double intensity, double lx, double ly,
                           double lap, double cv) {
  const double grad = std::sqrt(lx * lx + ly * ly);
  const double curvature = intensity * intensity * lap;
  if (kind == InvariantKind::m12g) return {grad, lap, curvature};
  return {grad * cv, lap * lap, curvature};
}

PixelTerms direct_route_terms(InvariantKind kind, double g, double ix, double iy, double lap,
                              double cv) {
  const double g1 = std::sqrt(ix * ix + iy * iy);
  const analytic::Jet jet{g, g1, lap, cv};
  const analytic::Ratio r =
      kind == InvariantKind::m12g ? analytic::ratio_12g(jet) : analytic::ratio_123g(jet);
  return {r.numerator, r.denominator, g * lap - g1 * g1};
}

}  // namespace

InvariantMap compute_invariant(const ScalarField& img, InvariantKind kind,
                               const InvariantOptions& options) {
  if (!(options.intensity_floor > 0.0)) throw InputError("intensity floor must be positive");
  if (!(options.case_tolerance >= 0.0)) throw InputError("case tolerance must be >= 0");

  ScalarField clamped = img;
  for (double& v : clamped.samples()) v = std::max(v, options.intensity_floor);
  const ScalarField intensity = prefilter(clamped, options.sigma_pre);

  ScalarField source = intensity;
  if (options.route == DerivativeRoute::log_domain) {
    for (int y = 0; y < source.height(); ++y) {
      for (int x = 0; x < source.width(); ++x) {
        source(x, y) = source.in_margin(x, y) ? std::log(source(x, y)) : 0.0;
      }
    }
  }

  const int order = kind == InvariantKind::m12g ? 2 : 3;
  const DerivativeJet jet = derivative_jet(source, options.derivative, order);
  const ScalarField lap = laplacian(jet);
  const ScalarField cv = order == 3 ? cubic_variation(jet) : ScalarField{};

  InvariantMap map;
  map.kind = kind;
  map.route = options.route;
  map.sigma_der = options.derivative.sigma;
  map.sigma_pre = options.sigma_pre;
  const int w = img.width(), h = img.height(), m = jet.margin();
  for (ScalarField* f : {&map.values, &map.numerator, &map.denominator, &map.curvature}) {
    *f = ScalarField(w, h);
    f->set_margin(m);
  }

  parallel_for(m, h - m, [&](int y) {
    for (int x = m; x < w - m; ++x) {
      const double c = cv.empty() ? 0.0 : cv(x, y);
      const PixelTerms t =
          options.route == DerivativeRoute::log_domain
              ? log_route_terms(kind, intensity(x, y), jet.dx(x, y), jet.dy(x, y), lap(x, y), c)
              : direct_route_terms(kind, intensity(x, y), jet.dx(x, y), jet.dy(x, y), lap(x, y),
                                   c);
      const double scale = std::max({std::abs(t.numerator), std::abs(t.denominator), 1.0});
      map.values(x, y) =
          analytic::bounded_ratio(t.numerator, t.denominator, options.case_tolerance * scale);
      map.numerator(x, y) = t.numerator;
      map.denominator(x, y) = t.denominator;
      map.curvature(x, y) = t.curvature;
    }
  });

  map.values.check_finite("compute_invariant");
  for (int y = m; y < h - m; ++y) {
    for (int x = m; x < w - m; ++x) {
      if (std::abs(map.values(x, y)) > 1.0) {
        throw InvariantViolation("compute_invariant: value outside [-1, 1]");
      }
    }
  }
  return map;
}

std::vector<std::uint8_t> well_conditioned(const InvariantMap& map, double tau) {
  const ScalarField& c = map.curvature;
  std::vector<std::uint8_t> mask(c.size(), 0);
  for (int y = 0; y < c.height(); ++y) {
    for (int x = 0; x < c.width(); ++x) {
      if (map.values.is_valid(x, y) && std::abs(c(x, y)) > tau) mask[c.index(x, y)] = 1;
    }
  }
  return mask;
}

}  // namespace gaminv
