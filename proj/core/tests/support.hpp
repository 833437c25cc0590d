#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include "gaminv/scalar_field.hpp"

namespace gaminv::testing {

template <typename F>
ScalarField make_field(int w, int h, F&& f) {
  ScalarField out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out(x, y) = f(double(x), double(y));
  }
  return out;
}

/// Largest |a - b| over pixels valid in both fields.
inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (a.is_valid(x, y) && b.is_valid(x, y)) m = std::max(m, std::abs(a(x, y) - b(x, y)));
    }
  }
  return m;
}

inline std::filesystem::path temp_dir_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("gaminv_test_" + name);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = temp_dir_path(name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace gaminv::testing
