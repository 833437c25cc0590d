#pragma once

#include <cstdint>
#include <vector>

#include "gaminv/invariant_image.hpp"
#include "gaminv/scalar_field.hpp"

namespace gaminv {

/// Reference magnitudes below this make the relative error undefined; such
/// pixels are dropped from the relative-error field and from n.
inline constexpr double kReferenceFloor = 1e-3;

/// |a - b| on the intersection of both valid regions. Values lie in [0, 2].
/// Throws InputError on shape or kind mismatch.
ScalarField absolute_error(const InvariantMap& a, const InvariantMap& b);

/// 100 * abs_err / |reference|, in percent. Pixels with |reference| < ref_floor
/// are marked invalid through the field mask.
ScalarField relative_error(const ScalarField& abs_err, const InvariantMap& reference,
                           double ref_floor = kReferenceFloor);

struct ReliablePoints {
  double epsilon = 0.0;
  /// Non-zero where the pixel is valid and its relative error is <= epsilon.
  std::vector<std::uint8_t> mask;
  std::size_t count = 0;
  std::size_t n_valid = 0;
  /// 100 * count / n_valid (0 when there are no valid pixels).
  double percentage = 0.0;
};

ReliablePoints reliable_points(const ScalarField& rel_err, double epsilon);

struct ErrorReport {
  ScalarField abs_err;
  ScalarField rel_err;
  std::vector<ReliablePoints> reliable;  ///< one entry per threshold, in input order
  std::size_t n_valid = 0;               ///< valid pixels of rel_err
  double mean_abs = 0.0;                 ///< over valid pixels of abs_err
  double median_abs = 0.0;

  double prp(double epsilon) const;
};

/// Absolute error, relative error and reliable points of `test` against
/// `reference` for each threshold in percent (default 5, 10, 20).
ErrorReport evaluate_errors(const InvariantMap& reference, const InvariantMap& test,
                            const std::vector<double>& thresholds = {5.0, 10.0, 20.0});

/// Mean and median of the valid samples of a field.
struct FieldStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};
FieldStats valid_stats(const ScalarField& f);

}  // namespace gaminv
