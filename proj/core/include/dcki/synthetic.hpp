#pragma once

#include <cstdint>

#include "dcki/common.hpp"

namespace dcki {

/// Gaussian classes in the plane pushed into R^dim by a fixed random
/// linear map followed by a coordinate-wise sine warp:
///   x = sin(z W + b) + noise,  z ~ N(mean_c, class_std^2 I_2).
struct SyntheticSpec {
  Index classes = 3;
  Index dim = 20;
  double class_radius = 2.0;  // class means on a circle of this radius
  double class_std = 0.7;
  double map_scale = 1.0;     // std of the entries of W
  double noise = 0.01;        // isotropic noise after the warp
  std::uint64_t map_seed = 0; // fixes W and b for the whole family
};

/// n samples with labels cycling 0, 1, ..., classes - 1.
Dataset make_synthetic(const SyntheticSpec& spec, Index n, std::uint64_t seed);

}  // namespace dcki
