#include "gaminv/error_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gaminv/error.hpp"

namespace gaminv {

ScalarField absolute_error(const InvariantMap& a, const InvariantMap& b) {
  if (!a.values.same_shape(b.values)) throw InputError("absolute_error: map sizes differ");
  if (a.kind != b.kind) throw InputError("absolute_error: map kinds differ");

  ScalarField out(a.values.width(), a.values.height());
  out.set_margin(std::max(a.margin(), b.margin()));
  const bool masked = a.values.has_mask() || b.values.has_mask();
  std::vector<std::uint8_t> mask;
  if (masked) mask.assign(out.size(), 0);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (!a.values.is_valid(x, y) || !b.values.is_valid(x, y)) continue;
      out(x, y) = std::abs(a.values(x, y) - b.values(x, y));
      if (masked) mask[out.index(x, y)] = 1;
    }
  }
  if (masked) out.set_mask(std::move(mask));
  return out;
}

ScalarField relative_error(const ScalarField& abs_err, const InvariantMap& reference,
                           double ref_floor) {
  if (!abs_err.same_shape(reference.values)) throw InputError("relative_error: sizes differ");
  if (!(ref_floor > 0.0)) throw InputError("relative_error: reference floor must be positive");

  ScalarField out(abs_err.width(), abs_err.height());
  out.set_margin(std::max(abs_err.margin(), reference.margin()));
  std::vector<std::uint8_t> mask(out.size(), 0);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (!abs_err.is_valid(x, y) || !reference.values.is_valid(x, y)) continue;
      const double ref = std::abs(reference.values(x, y));
      if (ref < ref_floor) continue;
      out(x, y) = 100.0 * abs_err(x, y) / ref;
      mask[out.index(x, y)] = 1;
    }
  }
  out.set_mask(std::move(mask));
  return out;
}

ReliablePoints reliable_points(const ScalarField& rel_err, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("reliable_points: epsilon must be positive");
  ReliablePoints rp;
  rp.epsilon = epsilon;
  rp.mask.assign(rel_err.size(), 0);
  for (int y = 0; y < rel_err.height(); ++y) {
    for (int x = 0; x < rel_err.width(); ++x) {
      if (!rel_err.is_valid(x, y)) continue;
      ++rp.n_valid;
      if (rel_err(x, y) <= epsilon) {
        rp.mask[rel_err.index(x, y)] = 1;
        ++rp.count;
      }
    }
  }
  rp.percentage = rp.n_valid == 0 ? 0.0 : 100.0 * rp.count / rp.n_valid;
  return rp;
}

double ErrorReport::prp(double epsilon) const {
  for (const ReliablePoints& rp : reliable) {
    if (rp.epsilon == epsilon) return rp.percentage;
  }
  throw InputError("no reliable-point entry for the requested threshold");
}

FieldStats valid_stats(const ScalarField& f) {
  std::vector<double> v;
  v.reserve(f.size());
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      if (f.is_valid(x, y)) v.push_back(f(x, y));
    }
  }
  FieldStats s;
  s.n = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (double d : v) sum += d;
  s.mean = sum / v.size();
  s.max = *std::max_element(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) {
    s.median = v[mid];
  } else {
    const double upper = v[mid];
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    s.median = 0.5 * (lower + upper);
  }
  return s;
}

ErrorReport evaluate_errors(const InvariantMap& reference, const InvariantMap& test,
                            const std::vector<double>& thresholds) {
  ErrorReport r;
  r.abs_err = absolute_error(test, reference);
  r.rel_err = relative_error(r.abs_err, reference);
  r.n_valid = r.rel_err.count_valid();
  for (double eps : thresholds) r.reliable.push_back(reliable_points(r.rel_err, eps));
  const FieldStats s = valid_stats(r.abs_err);
  r.mean_abs = s.mean;
  r.median_abs = s.median;
  return r;
}

}  // namespace gaminv
