#include "dcki/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "dcki/random.hpp"

namespace dcki {

Dataset make_synthetic(const SyntheticSpec& spec, Index n, std::uint64_t seed) {
  require(spec.classes >= 1 && spec.dim >= 1 && n >= 0,
          ErrorCode::kInvalidArgument, "invalid synthetic spec");
  CounterRng map_rng = CounterRng::stream(spec.map_seed, Purpose::kSynthetic, 0);
  const Matrix W = spec.map_scale * random_normal(2, spec.dim, map_rng);
  RowVector b(spec.dim);
  for (Index j = 0; j < spec.dim; ++j)
    b(j) = map_rng.uniform(0.0, 2.0 * std::numbers::pi);

  CounterRng rng = CounterRng::stream(seed, Purpose::kSynthetic, 1);
  Dataset out{Matrix(n, spec.dim), Targets(n)};
  for (Index i = 0; i < n; ++i) {
    const Index c = i % spec.classes;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) /
                         static_cast<double>(spec.classes);
    Eigen::RowVector2d z(spec.class_radius * std::cos(angle) + spec.class_std * rng.normal(),
                         spec.class_radius * std::sin(angle) + spec.class_std * rng.normal());
    RowVector x = (z * W + b).array().sin().matrix();
    for (Index j = 0; j < spec.dim; ++j) x(j) += spec.noise * rng.normal();
    out.X.row(i) = x;
    out.y(i) = static_cast<double>(c);
  }
  return out;
}

}  // namespace dcki
