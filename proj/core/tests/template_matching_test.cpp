#include "gaminv/template_matching.hpp"

#include <gtest/gtest.h>

#include "gaminv/error.hpp"
#include "gaminv/invariant_image.hpp"
#include "gaminv/synth.hpp"
#include "support.hpp"

namespace gaminv {
namespace {

using testing::make_field;

ScalarField patch(std::vector<double> v) { return ScalarField(2, 2, std::move(v)); }

TEST(Score, SelfMatchIsOne) {
  const ScalarField img = synth_image(SynthKind::gaussians, 1, 20, 20);
  const ScalarField t = cut_template(img, {4, 5}, {6, 8});
  EXPECT_EQ(t.width(), 6);
  EXPECT_EQ(t.height(), 8);
  EXPECT_EQ(t(0, 0), img(4, 5));
  EXPECT_EQ(t(5, 7), img(9, 12));
  EXPECT_EQ(correlation_score(img, t, {4, 5}).score, 1.0);
}

TEST(Score, OffsetIsIgnored) {
  const ScalarField a = patch({1, 2, 3, 5});
  const ScalarField b = patch({11, 12, 13, 15});
  EXPECT_DOUBLE_EQ(correlation_score(b, a, {0, 0}).score, 1.0);
}

TEST(Score, OrthogonalAndOpposite) {
  // centred a = (1, -1, 1, -1), centred b = (1, 1, -1, -1): orthogonal, c = 2
  EXPECT_EQ(correlation_score(patch({1, -1, 1, -1}), patch({1, 1, -1, -1}), {0, 0}).score, 0.0);
  // b = -a: c = 4
  EXPECT_EQ(correlation_score(patch({1, -1, 1, -1}), patch({-1, 1, -1, 1}), {0, 0}).score, 0.0);
}

TEST(Score, ContrastChange) {
  // b = 2a: sum (a - 2a)^2 / sqrt(E * 4E) = 1/2
  EXPECT_DOUBLE_EQ(correlation_score(patch({2, -2, 4, 0}), patch({1, -1, 2, 0}), {0, 0}).score, 0.5);
}

TEST(Score, Degenerate) {
  const Correlation c = correlation_score(patch({1, 2, 3, 4}), patch({7, 7, 7, 7}), {0, 0});
  EXPECT_TRUE(c.degenerate);
  EXPECT_EQ(c.score, 0.0);
  const Correlation d = correlation_score(patch({5, 5, 5, 5}), patch({1, 2, 3, 4}), {0, 0});
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.score, 0.0);
}

TEST(Score, TemplateMustFit) {
  EXPECT_THROW(correlation_score(ScalarField(4, 4), ScalarField(3, 3), {2, 0}), InputError);
}

TEST(Locate, UniqueMaximum) {
  const ScalarField img = synth_image(SynthKind::checker_blur, 2, 30, 30);
  const ScalarField t = cut_template(img, {11, 7}, {6, 8});
  const LocateResult r = locate_template(img, t, {11, 7});
  EXPECT_TRUE(r.is_cmcp);
  EXPECT_EQ(r.best, (Anchor{11, 7}));
  EXPECT_EQ(r.best_score, 1.0);
}

TEST(Locate, TiesAreNotCorrect) {
  // period-4 stripes: every shifted copy matches equally well
  const ScalarField img = make_field(24, 24, [](double x, double) { return double(int(x) % 4); });
  const ScalarField t = cut_template(img, {4, 4}, {6, 8});
  const LocateResult r = locate_template(img, t, {4, 4});
  EXPECT_FALSE(r.is_cmcp);
  EXPECT_EQ(r.best_score, 1.0);
}

TEST(Locate, TrueAnchorMustBeValid) {
  const ScalarField img = synth_image(SynthKind::ripple, 2, 20, 20);
  const ScalarField t = cut_template(img, {0, 0}, {6, 8});
  EXPECT_THROW(locate_template(img, t, {15, 0}), InputError);
}

// Pruned search against a plain scan over every anchor.
TEST(Accuracy, MatchesBruteForce) {
  const ScalarField src = synth_image(SynthKind::gaussians, 4, 26, 22);
  const ScalarField tgt = gamma_correct(src, 0.6, 255.0, true);
  const TemplateSize size{6, 8};
  const MatchReport rep = correlation_accuracy(src, tgt, size);
  ASSERT_EQ(rep.records.size(), std::size_t((26 - 5) * (22 - 7)));
  std::size_t correct = 0;
  for (const MatchRecord& rec : rep.records) {
    const ScalarField t = cut_template(src, rec.anchor, size);
    double best = -1.0;
    int n_best = 0;
    Anchor where;
    for (int y = 0; y + 8 <= 22; ++y) {
      for (int x = 0; x + 6 <= 26; ++x) {
        const double s = correlation_score(tgt, t, {x, y}).score;
        if (s > best) {
          best = s;
          n_best = 1;
          where = {x, y};
        } else if (s == best) {
          ++n_best;
        }
      }
    }
    const bool cmcp = !rec.degenerate && n_best == 1 && where == rec.anchor;
    EXPECT_EQ(rec.is_cmcp, cmcp) << rec.anchor.x << "," << rec.anchor.y;
    if (cmcp) EXPECT_EQ(rec.best, where);
    correct += cmcp;
  }
  EXPECT_EQ(rep.n_correct, correct);
  EXPECT_DOUBLE_EQ(rep.ca, 100.0 * correct / rep.n_valid);
}

TEST(Accuracy, SelfMatchIsPerfect) {
  for (SynthKind s : {SynthKind::gaussians, SynthKind::ripple, SynthKind::checker_blur}) {
    const ScalarField img = synth_image(s, 1, 40, 40);
    const MatchReport a = correlation_accuracy(img, img, {6, 8});
    EXPECT_EQ(a.ca, 100.0);
    const InvariantMap m = compute_invariant(img, InvariantKind::m12g);
    const MatchReport b = correlation_accuracy(m.values, m.values, {10, 10});
    EXPECT_EQ(b.ca, 100.0);
    EXPECT_GT(b.n_valid, 0u);
  }
}

TEST(Accuracy, AnchorsStayInsideValidRegion) {
  const InvariantMap m = compute_invariant(synth_image(SynthKind::ripple, 1, 30, 24), InvariantKind::m12g);
  const MatchReport r = correlation_accuracy(m.values, m.values, {6, 8});
  // valid region is [3, 27) x [3, 21): anchors x in [3, 21], y in [3, 13]
  EXPECT_EQ(r.records.size(), 19u * 11u);
  EXPECT_EQ(r.records.front().anchor, (Anchor{3, 3}));
  EXPECT_EQ(r.records.back().anchor, (Anchor{21, 13}));
  EXPECT_EQ(r.cmcp_mask.size(), 30u * 24u);
}

TEST(Accuracy, ConstantImageIsAllDegenerate) {
  const MatchReport r = correlation_accuracy(ScalarField(16, 16, 3.0), ScalarField(16, 16, 3.0), {6, 8});
  EXPECT_EQ(r.n_valid, 0u);
  EXPECT_EQ(r.n_degenerate, 11u * 9u);
  EXPECT_EQ(r.ca, 0.0);
}

TEST(Accuracy, Rejections) {
  EXPECT_THROW(correlation_accuracy(ScalarField(16, 16), ScalarField(16, 15), {6, 8}), InputError);
  EXPECT_THROW(correlation_accuracy(ScalarField(16, 16), ScalarField(16, 16), {0, 8}), InputError);
}

TEST(Surface, PeaksAtOrigin) {
  const ScalarField img = synth_image(SynthKind::checker_blur, 3, 30, 30);
  const ScalarField t = cut_template(img, {9, 12}, {10, 10});
  const ScalarField s = correlation_surface(img, t);
  EXPECT_EQ(s(9, 12), 1.0);
  for (double v : s.samples()) EXPECT_LE(v, 1.0);
}

}  // namespace
}  // namespace gaminv
