#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elight/cell.hpp"
#include "elight/matrix.hpp"
#include "elight/schedule.hpp"
#include "elight/write.hpp"

namespace elight {

struct ConvShape {
  std::size_t out_ch = 0;
  std::size_t in_ch = 0;
  std::size_t kh = 0;
  std::size_t kw = 0;
};

/// Flatten an O x I x Kh x Kw kernel (row-major) into the O x (I*Kh*Kw) GEMM
/// operand used by im2col convolution.
Matrix conv_to_gemm(const ConvShape& shape, const std::vector<double>& weights);

/// Zero-padded partition of a weight matrix into ceil(M/k) x ceil(N/k)
/// blocks of size k x k.
struct BlockGrid {
  int k = 0;
  std::size_t block_rows = 0;
  std::size_t block_cols = 0;
  std::size_t orig_rows = 0;
  std::size_t orig_cols = 0;
  Matrix padded;

  Matrix block(std::size_t p, std::size_t q) const;
  /// Inverse of partition: crop the padded matrix back to its input shape.
  Matrix reassemble() const;
};

BlockGrid partition(const Matrix& w, int k);

/// Distribute the grid over PTCs. With ptc_count == 0 each block row gets
/// its own PTC; otherwise whole block rows go round-robin over ptc_count
/// PTCs, steps ordered row-major within each PTC.
LayerSchedule assign(const BlockGrid& grid, int ptc_count = 0);

/// Optional input discretization: uniform affine over [-m, m] with
/// 2^activation_bits - 1 steps, m = max(|inputs|, running_max).
struct ExecuteOptions {
  bool quantize_activations = false;
  int activation_bits = 8;
  double running_max = 0.0;
};

/// Time-multiplexed layer product: inputs is N x m (weight_cols rows), the
/// result W x inputs is M x m. Scheduled values are multiplied verbatim;
/// quantization happens upstream when a checkpoint is quantized or a block
/// is programmed. Honors per-cell permutations via input rerouting and
/// undoes any row remapping before returning.
Matrix execute_layer(const LayerSchedule& schedule, const Matrix& inputs,
                     const ExecuteOptions& opts = {});

struct NetworkLayer {
  enum class Kind { Dense, Conv };
  std::string name;
  Kind kind = Kind::Dense;
  std::vector<std::size_t> shape;  // dense: {M, N}; conv: {O, I, Kh, Kw}
  Matrix weights;                  // GEMM form, normalized into [-1, 1]
};

struct NetworkModel {
  std::string name;
  std::vector<NetworkLayer> layers;
};

struct LayerWriteReport {
  std::string layer;
  WriteStats stats;
};

/// totals follows the report convention: every field is the column sum over
/// layers, max_cell_writes included.
struct NetworkWriteReport {
  std::vector<LayerWriteReport> layers;
  WriteStats totals;
};

NetworkWriteReport simulate_network(const NetworkModel& model, const CellConfig& cfg, int k,
                                    int ptc_count = 0, const EnergyModel& energy = {});

}  // namespace elight
