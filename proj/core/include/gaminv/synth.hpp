#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "gaminv/scalar_field.hpp"

namespace gaminv {

enum class SynthKind {
  gaussians,     ///< random isotropic blobs of mixed sign and width
  ripple,        ///< radial r*sin(2*pi*r) + const pattern around a random centre
  checker_blur,  ///< checkerboard of random cell intensities, Gaussian blurred
};

std::string_view to_string(SynthKind kind);
/// "gaussians", "ripple" or "checker-blur"; throws InputError otherwise.
SynthKind parse_synth_kind(std::string_view s);

/// Deterministic smooth textured test image with values in [1, 255].
/// Equal (kind, seed, width, height) always give bit-identical fields.
ScalarField synth_image(SynthKind kind, std::uint64_t seed, int width, int height);

/// splitmix64-seeded xoshiro-style generator with portable uniform and normal
/// draws (std distributions are implementation defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                 ///< [0, 1)
  double uniform(double lo, double hi);
  double normal();                  ///< standard normal, Box-Muller

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gaminv
