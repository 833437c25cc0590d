#pragma once

#include <cstdint>
#include <vector>

#include "gaminv/scalar_field.hpp"

namespace gaminv {

/// Template extent; `width` runs along x (tn), `height` along y (tm).
struct TemplateSize {
  int width = 6;
  int height = 8;
};

/// Top-left corner of a template placement.
struct Anchor {
  int x = 0;
  int y = 0;
  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct Correlation {
  double score = 0.0;       ///< s = max(0, 1 - c), in [0, 1]
  bool degenerate = false;  ///< template or sub-image constant; score forced to 0
};

/// Normalised mean squared difference between the template and the sub-image
/// of `img` anchored at `at`:
///   c = sum(((I - mean I) - (T - mean T))^2) / sqrt(sum((I - mean I)^2) sum((T - mean T)^2))
/// and s = max(0, 1 - c). Throws InputError if the template does not fit.
Correlation correlation_score(const ScalarField& img, const ScalarField& tmpl, Anchor at);

/// Copies the template-sized block of `img` at `at`.
ScalarField cut_template(const ScalarField& img, Anchor at, TemplateSize size);

struct LocateResult {
  Anchor best;
  double best_score = 0.0;
  bool is_cmcp = false;     ///< best == true position and nothing else ties it
  bool degenerate = false;  ///< constant template; never a CMCP
};

/// Exhaustive search for the best placement of `tmpl` over every valid anchor
/// of `img`. `true_pos` must itself be a valid anchor.
LocateResult locate_template(const ScalarField& img, const ScalarField& tmpl, Anchor true_pos);

struct MatchRecord {
  Anchor anchor;
  Anchor best;
  double score = 0.0;
  bool is_cmcp = false;
  bool degenerate = false;
};

struct MatchReport {
  TemplateSize size;
  int width = 0;   ///< image dimensions; cmcp_mask is width x height
  int height = 0;
  std::vector<std::uint8_t> cmcp_mask;  ///< 1 at anchors located correctly
  std::vector<MatchRecord> records;     ///< one per anchor, row-major
  std::size_t n_valid = 0;              ///< non-degenerate anchors
  std::size_t n_correct = 0;
  std::size_t n_degenerate = 0;
  double ca = 0.0;  ///< 100 * n_correct / n_valid
};

/// For every anchor where the template fits inside the valid region of both
/// fields, cut the template from `source`, locate it in `target`, and record
/// whether it lands exactly at its origin. Constant templates are counted in
/// n_degenerate and excluded from n_valid.
MatchReport correlation_accuracy(const ScalarField& source, const ScalarField& target,
                                 TemplateSize size);

/// Score of `tmpl` at every valid anchor of `img` (0 elsewhere).
ScalarField correlation_surface(const ScalarField& img, const ScalarField& tmpl);

}  // namespace gaminv
