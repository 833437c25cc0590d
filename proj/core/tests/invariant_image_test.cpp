#include "gaminv/invariant_image.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gaminv/error.hpp"
#include "gaminv/synth.hpp"
#include "support.hpp"

namespace gaminv {
namespace {

using testing::make_field;
using testing::max_abs_diff;

constexpr SynthKind kKinds[] = {SynthKind::gaussians, SynthKind::ripple, SynthKind::checker_blur};

InvariantOptions float_options() {
  InvariantOptions o;
  o.intensity_floor = std::numeric_limits<double>::min();
  return o;
}

TEST(GammaCorrect, PowerLawWithFixedWhite) {
  ScalarField img(3, 1, std::vector<double>{0.0, 64.0, 255.0});
  const ScalarField g = gamma_correct(img, 0.6);
  EXPECT_EQ(g(0, 0), 0.0);
  EXPECT_NEAR(g(1, 0), std::pow(255.0, 0.4) * std::pow(64.0, 0.6), 1e-12);
  EXPECT_NEAR(g(2, 0), 255.0, 1e-12);
}

TEST(GammaCorrect, ReferenceValue) {
  // 255^0.55 * 30^0.45
  EXPECT_NEAR(gamma_correct(ScalarField(1, 1, 30.0), 0.45)(0, 0), 97.342313524774, 1e-9);
}

TEST(GammaCorrect, Requantize) {
  ScalarField img(3, 1, std::vector<double>{1.0, 64.0, 255.0});
  const ScalarField g = gamma_correct(img, 0.6, 255.0, true);
  EXPECT_EQ(g(0, 0), std::round(std::pow(255.0, 0.4)));
  EXPECT_EQ(g(1, 0), 111.0);  // 255^0.4 * 64^0.6 = 110.96...
  EXPECT_EQ(g(2, 0), 255.0);
}

TEST(GammaCorrect, Rejections) {
  EXPECT_THROW(gamma_correct(ScalarField(2, 2, -1.0), 0.6), InputError);
  EXPECT_THROW(gamma_correct(ScalarField(2, 2, 1.0), 0.0), InputError);
  EXPECT_THROW(gamma_correct(ScalarField(2, 2, 1.0), 0.6, -1.0), InputError);
}

TEST(Prefilter, ZeroIsIdentityAndConstantsSurvive) {
  const ScalarField img = synth_image(SynthKind::ripple, 1, 20, 20);
  const ScalarField same = prefilter(img, 0.0);
  EXPECT_EQ(same.margin(), 0);
  for (std::size_t i = 0; i < img.size(); ++i) EXPECT_EQ(same.samples()[i], img.samples()[i]);
  const ScalarField c = prefilter(ScalarField(20, 20, 9.0), 1.0);
  EXPECT_EQ(c.margin(), 3);
  EXPECT_LT(max_abs_diff(c, ScalarField(20, 20, 9.0)), 1e-12);
  EXPECT_THROW(prefilter(img, -1.0), InputError);
}

TEST(Invariant, ConstantImageIsZero) {
  for (InvariantKind kind : {InvariantKind::m12g, InvariantKind::m123g}) {
    const InvariantMap m = compute_invariant(ScalarField(16, 16, 80.0), kind);
    EXPECT_EQ(m.margin(), 3);
    for (double v : m.values.samples()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Invariant, MarginIncludesPrefilter) {
  InvariantOptions o;
  o.sigma_pre = 1.0;
  const InvariantMap m = compute_invariant(synth_image(SynthKind::ripple, 1, 32, 32), InvariantKind::m12g, o);
  EXPECT_EQ(m.margin(), 6);
}

TEST(Invariant, ParseNames) {
  EXPECT_EQ(parse_invariant_kind("m123g"), InvariantKind::m123g);
  EXPECT_EQ(parse_derivative_route("direct"), DerivativeRoute::direct);
  EXPECT_EQ(to_string(InvariantKind::m12g), "m12g");
  EXPECT_THROW(parse_invariant_kind("m13g"), InputError);
  EXPECT_THROW(parse_derivative_route("linear"), InputError);
}

// Rows follow the closed-form signal. The gradient magnitude is unsigned, so
// the sign of the map is the sign of f f'' - f'^2 away from its zeros.
TEST(Invariant, SignMatchesOneDimensionalSignal) {
  const ScalarField img =
      make_field(64, 9, [](double x, double) { const double t = x / 32.0; return 3 * t * std::sin(2 * M_PI * t) + 30; });
  const InvariantMap m = compute_invariant(img, InvariantKind::m12g, float_options());
  int agree = 0, total = 0;
  for (int x = 3; x < 61; ++x) {
    const double t = x / 32.0;
    const double f = 3 * t * std::sin(2 * M_PI * t) + 30;
    const double f1 = 3 * std::sin(2 * M_PI * t) + 6 * M_PI * t * std::cos(2 * M_PI * t);
    const double f2 = 12 * M_PI * std::cos(2 * M_PI * t) - 12 * M_PI * M_PI * t * std::sin(2 * M_PI * t);
    const double d = f * f2 - f1 * f1;
    if (std::abs(d) < 50.0 || std::abs(f1) < 0.5) continue;
    ++total;
    if ((m.values(x, 4) > 0) == (d > 0)) ++agree;
  }
  EXPECT_GT(total, 20);
  EXPECT_EQ(agree, total);
}

// Property: every pixel of every synthetic image stays in [-1, 1].
TEST(Property, Boundedness) {
  for (SynthKind s : kKinds) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const ScalarField img = synth_image(s, seed, 48, 48);
      for (InvariantKind kind : {InvariantKind::m12g, InvariantKind::m123g}) {
        for (DerivativeRoute route : {DerivativeRoute::log_domain, DerivativeRoute::direct}) {
          InvariantOptions o;
          o.route = route;
          for (const ScalarField& in : {img, gamma_correct(img, 0.6, 255.0, true)}) {
            const InvariantMap m = compute_invariant(in, kind, o);
            for (double v : m.values.samples()) ASSERT_TRUE(v >= -1.0 && v <= 1.0);
          }
        }
      }
    }
  }
}

// Property: float-path gamma pairs give the same map on the log route.
TEST(Property, FloatGammaInvariance) {
  Rng rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const SynthKind s = kKinds[trial % 3];
    const ScalarField img = synth_image(s, 10 + trial, 48, 48);
    const double gamma = rng.uniform(0.4, 2.5);
    for (InvariantKind kind : {InvariantKind::m12g, InvariantKind::m123g}) {
      const InvariantMap a = compute_invariant(img, kind, float_options());
      const InvariantMap b = compute_invariant(gamma_correct(img, gamma), kind, float_options());
      const auto mask = well_conditioned(a, default_conditioning_threshold());
      double worst = 0.0;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) worst = std::max(worst, std::abs(a.values.samples()[i] - b.values.samples()[i]));
      }
      EXPECT_LT(worst, 1e-6) << to_string(s) << " gamma " << gamma << " " << to_string(kind);
    }
  }
}

// Property: multiplying the image by a constant leaves the map unchanged.
TEST(Property, IntensityScaleInvariance) {
  for (SynthKind s : kKinds) {
    const ScalarField img = synth_image(s, 4, 40, 40);
    const ScalarField scaled = map_field(img, [](double v) { return 0.37 * v; });
    for (InvariantKind kind : {InvariantKind::m12g, InvariantKind::m123g}) {
      const InvariantMap a = compute_invariant(img, kind, float_options());
      const InvariantMap b = compute_invariant(scaled, kind, float_options());
      const auto mask = well_conditioned(a, default_conditioning_threshold());
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) ASSERT_NEAR(a.values.samples()[i], b.values.samples()[i], 1e-9);
      }
    }
  }
}

// Property: maps of a rotated image are the rotated maps.
TEST(Property, RotationInvariance) {
  for (SynthKind s : kKinds) {
    const ScalarField img = synth_image(s, 8, 36, 28);
    for (InvariantKind kind : {InvariantKind::m12g, InvariantKind::m123g}) {
      const InvariantMap a = compute_invariant(img, kind);
      const InvariantMap b = compute_invariant(rotate90(img), kind);
      const ScalarField ra = rotate90(a.values);
      const auto mask = well_conditioned(b, default_conditioning_threshold());
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) ASSERT_NEAR(ra.samples()[i], b.values.samples()[i], 1e-12);
      }
    }
  }
}

TEST(Invariant, BranchAgreement) {
  for (InvariantKind kind : {InvariantKind::m12g, InvariantKind::m123g}) {
    const InvariantMap m = compute_invariant(synth_image(SynthKind::gaussians, 2, 96, 96), kind);
    std::size_t n = 0;
    for (int y = 0; y < 96; ++y) {
      for (int x = 0; x < 96; ++x) {
        if (!m.values.is_valid(x, y)) continue;
        const double num = m.numerator(x, y), den = m.denominator(x, y);
        const double eps = kCaseTolerance * std::max({std::abs(num), std::abs(den), 1.0});
        if (std::abs(num) < std::abs(den) - 10 * eps) {
          ++n;
          ASSERT_EQ(m.values(x, y), num / den);
        }
      }
    }
    EXPECT_GT(n, 100u);
  }
}

// Re-quantising after the gamma map breaks exactness but keeps the maps close.
TEST(Invariant, EightBitMedianError) {
  for (SynthKind s : kKinds) {
    const ScalarField img = gamma_correct(synth_image(s, 1, 96, 96), 1.0, 255.0, true);
    const ScalarField img_g = gamma_correct(img, 0.6, 255.0, true);
    const InvariantMap a = compute_invariant(img, InvariantKind::m12g);
    const InvariantMap b = compute_invariant(img_g, InvariantKind::m12g);
    std::vector<double> d;
    for (int y = 0; y < 96; ++y) {
      for (int x = 0; x < 96; ++x) {
        if (a.values.is_valid(x, y)) d.push_back(std::abs(a.values(x, y) - b.values(x, y)));
      }
    }
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    EXPECT_LT(d[d.size() / 2], 0.05) << to_string(s);
  }
}

// One smooth analytic image sampled at two rates: the scale-invariant map agrees
// at corresponding points up to the difference in effective filter scale.
TEST(Invariant, ScaleProbe) {
  Rng rng(21);
  struct Blob { double cx, cy, s, a; };
  std::vector<Blob> blobs;
  for (int i = 0; i < 12; ++i) {
    blobs.push_back({rng.uniform(0, 48), rng.uniform(0, 48), rng.uniform(8, 14), rng.uniform(-40, 40)});
  }
  const auto F = [&](double x, double y) {
    double v = 120.0;
    for (const Blob& b : blobs) {
      v += b.a * std::exp(-((x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy)) / (2 * b.s * b.s));
    }
    return v;
  };
  const ScalarField coarse = make_field(48, 48, F);
  const ScalarField fine = make_field(96, 96, [&](double x, double y) { return F(x / 2, y / 2); });
  const InvariantMap a = compute_invariant(coarse, InvariantKind::m123g, float_options());
  // Doubling the sampling rate doubles the derivative scale in pixels.
  InvariantOptions fine_options = float_options();
  fine_options.derivative = {2.0, default_kernel_size(2.0)};
  const InvariantMap b = compute_invariant(fine, InvariantKind::m123g, fine_options);
  std::size_t n = 0;
  for (int y = 8; y < 40; ++y) {
    for (int x = 8; x < 40; ++x) {
      const double va = a.values(x, y), vb = b.values(2 * x, 2 * y);
      // well conditioned: curvature of the coarse image clear of zero and a
      // non-vanishing invariant
      if (std::abs(a.curvature(x, y)) < 1.0 || std::abs(va) < 0.05) continue;
      ++n;
      EXPECT_NEAR(vb, va, 0.05 * std::abs(va)) << x << "," << y;
    }
  }
  EXPECT_GT(n, 50u);
}

TEST(Conditioning, MaskIsSubsetOfValid) {
  const InvariantMap m = compute_invariant(synth_image(SynthKind::gaussians, 1, 40, 40), InvariantKind::m12g);
  const auto mask = well_conditioned(m, default_conditioning_threshold());
  std::size_t n = 0;
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) {
      if (mask[m.values.index(x, y)]) {
        ++n;
        EXPECT_TRUE(m.values.is_valid(x, y));
        EXPECT_GT(std::abs(m.curvature(x, y)), default_conditioning_threshold());
      }
    }
  }
  EXPECT_GT(n, 0u);
  EXPECT_LT(n, m.values.count_valid());
}

}  // namespace
}  // namespace gaminv
