#include "lrs/commcost.hpp"

#include <algorithm>

#include "lrs/errors.hpp"

namespace lrs {

namespace {

void check_shape(const ShardedLayerShape& shape) {
  if (shape.m < 1 || shape.n < 1) {
    throw ValidationError("commcost: m and n must be positive");
  }
  if (shape.rank < 1 || shape.rank > std::min(shape.m, shape.n)) {
    throw ValidationError("commcost: rank outside [1, min(m, n)]");
  }
  if (shape.dtype_bytes != 2 && shape.dtype_bytes != 4 && shape.dtype_bytes != 8) {
    throw ValidationError("commcost: dtype_bytes must be 2, 4, or 8");
  }
  if (shape.world_size < 1) {
    throw ValidationError("commcost: world_size must be positive");
  }
}

}  // namespace

CommVolume per_step_volume(const ShardedLayerShape& shape, CommMethod method) {
  check_shape(shape);
  const std::int64_t m = shape.m;
  const std::int64_t n = shape.n;
  CommVolume volume;
  switch (method) {
    case CommMethod::lowrank:
      volume.elements = (m + n) * shape.rank;
      break;
    case CommMethod::fullrank_extra:
      // One all-gather plus one reduce-scatter of the momentum matrix.
      volume.elements = 2 * m * n;
      break;
  }
  volume.bytes = volume.elements * shape.dtype_bytes;
  return volume;
}

VolumeReport model_volume_report(std::span<const ShardedLayerShape> shapes,
                                 std::span<const CommMethod> methods,
                                 bool include_base) {
  if (shapes.size() != methods.size()) {
    throw ValidationError("model_volume_report: one method per layer required");
  }
  VolumeReport report;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    CommVolume volume = per_step_volume(shapes[i], methods[i]);
    if (include_base) {
      const std::int64_t base =
          2 * static_cast<std::int64_t>(shapes[i].m) * shapes[i].n;
      volume.elements += base;
      volume.bytes += base * shapes[i].dtype_bytes;
    }
    report.rows.push_back(LayerVolumeRow{static_cast<int>(i), methods[i],
                                         volume.elements, volume.bytes});
    report.total_elements += volume.elements;
    report.total_bytes += volume.bytes;
  }
  return report;
}

}  // namespace lrs
