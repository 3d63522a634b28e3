#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lrs {

/// One sharded layer as seen by the communication-volume model.
struct ShardedLayerShape {
  int m = 0;
  int n = 0;
  int rank = 0;
  int dtype_bytes = 4;
  int world_size = 1;
};

enum class CommMethod { lowrank, fullrank_extra };

struct CommVolume {
  std::int64_t elements = 0;
  std::int64_t bytes = 0;
};

/// Optimizer-induced traffic per step, excluding the base forward/backward
/// collectives: lowrank exchanges the (m+n) x rank factors; fullrank_extra
/// is the all-gather/reduce-scatter pair on the full m x n momentum matrix.
/// The model counts logical volume per matrix; world_size does not enter.
CommVolume per_step_volume(const ShardedLayerShape& shape, CommMethod method);

struct LayerVolumeRow {
  int layer = 0;
  CommMethod method = CommMethod::lowrank;
  std::int64_t elements = 0;
  std::int64_t bytes = 0;
};

struct VolumeReport {
  std::vector<LayerVolumeRow> rows;
  std::int64_t total_elements = 0;
  std::int64_t total_bytes = 0;
};

/// Per-layer volumes plus totals. `include_base` adds the weight
/// all-gather / gradient reduce-scatter common to all methods (2mn per
/// layer), for absolute rather than comparative totals.
VolumeReport model_volume_report(std::span<const ShardedLayerShape> shapes,
                                 std::span<const CommMethod> methods,
                                 bool include_base = false);

}  // namespace lrs
