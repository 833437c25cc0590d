#include "gaminv/error_metrics.hpp"

#include <gtest/gtest.h>

#include "gaminv/error.hpp"
#include "gaminv/synth.hpp"

namespace gaminv {
namespace {

InvariantMap map_of(int w, int h, std::vector<double> v, int margin = 0) {
  InvariantMap m;
  m.values = ScalarField(w, h, std::move(v));
  m.values.set_margin(margin);
  return m;
}

TEST(Errors, IdenticalMaps) {
  const InvariantMap a = compute_invariant(synth_image(SynthKind::ripple, 1, 32, 32), InvariantKind::m12g);
  const ErrorReport r = evaluate_errors(a, a);
  EXPECT_EQ(r.mean_abs, 0.0);
  EXPECT_EQ(r.median_abs, 0.0);
  for (const ReliablePoints& rp : r.reliable) EXPECT_EQ(rp.percentage, 100.0);
  EXPECT_EQ(r.reliable.size(), 3u);
}

TEST(Errors, HandComputedPercentages) {
  // reference, test -> relative error in percent
  //  0.5,  0.52   -> 4
  // -0.2, -0.23   -> 15
  //  1e-4, 0.9    -> invalid (reference below floor)
  //  0.1,  0.0    -> 100
  //  0.8,  0.8    -> 0
  //  -1,   -0.93  -> 7
  const InvariantMap ref = map_of(3, 2, {0.5, -0.2, 1e-4, 0.1, 0.8, -1.0});
  const InvariantMap tst = map_of(3, 2, {0.52, -0.23, 0.9, 0.0, 0.8, -0.93});
  const ErrorReport r = evaluate_errors(ref, tst);
  EXPECT_EQ(r.n_valid, 5u);
  EXPECT_NEAR(r.rel_err(0, 0), 4.0, 1e-9);
  EXPECT_NEAR(r.rel_err(1, 0), 15.0, 1e-9);
  EXPECT_FALSE(r.rel_err.is_valid(2, 0));
  EXPECT_NEAR(r.rel_err(0, 1), 100.0, 1e-9);
  EXPECT_DOUBLE_EQ(r.prp(5.0), 40.0);
  EXPECT_DOUBLE_EQ(r.prp(10.0), 60.0);
  EXPECT_DOUBLE_EQ(r.prp(20.0), 80.0);
  EXPECT_EQ(r.reliable[0].mask[0], 1);
  EXPECT_EQ(r.reliable[0].mask[1], 0);
  EXPECT_EQ(r.reliable[0].mask[2], 0);
  // absolute error covers all six pixels
  EXPECT_NEAR(r.mean_abs, (0.02 + 0.03 + (0.9 - 1e-4) + 0.1 + 0.0 + 0.07) / 6.0, 1e-12);
  EXPECT_NEAR(r.median_abs, 0.05, 1e-12);
  EXPECT_THROW(r.prp(7.0), InputError);
}

TEST(Errors, MarginsIntersect) {
  const InvariantMap a = map_of(5, 5, std::vector<double>(25, 0.5), 1);
  const InvariantMap b = map_of(5, 5, std::vector<double>(25, 0.4), 2);
  const ScalarField d = absolute_error(a, b);
  EXPECT_EQ(d.margin(), 2);
  EXPECT_EQ(d.count_valid(), 1u);
  EXPECT_NEAR(d(2, 2), 0.1, 1e-15);
}

TEST(Errors, Mismatches) {
  InvariantMap a = map_of(2, 2, {0, 0, 0, 0});
  InvariantMap b = map_of(2, 3, {0, 0, 0, 0, 0, 0});
  EXPECT_THROW(absolute_error(a, b), InputError);
  InvariantMap c = map_of(2, 2, {0, 0, 0, 0});
  c.kind = InvariantKind::m123g;
  EXPECT_THROW(absolute_error(a, c), InputError);
  EXPECT_THROW(reliable_points(a.values, 0.0), InputError);
}

TEST(Errors, NoValidPixels) {
  const InvariantMap z = map_of(2, 2, {0, 0, 0, 0});
  const ErrorReport r = evaluate_errors(z, z);
  EXPECT_EQ(r.n_valid, 0u);
  EXPECT_EQ(r.prp(20.0), 0.0);
}

TEST(Stats, MeanMedian) {
  ScalarField f(4, 1, std::vector<double>{4.0, 1.0, 3.0, 2.0});
  const FieldStats s = valid_stats(f);
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.max, 4.0);
}

}  // namespace
}  // namespace gaminv
