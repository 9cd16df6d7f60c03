#pragma once

#include <cstdint>
#include <vector>

#include "elight/cell.hpp"
#include "elight/matrix.hpp"
#include "elight/schedule.hpp"
#include "elight/write.hpp"

namespace elight {

/// tanh-squash then rescale so the largest magnitude becomes exactly 1.
/// An all-zero matrix comes back all zero.
Matrix normalize_weights(const Matrix& w);

/// Differentiable stand-ins for the two level coordinates, normalized by
/// max_level: the rounding is dropped, the clip kept. Used by the gradient
/// and by finite-difference checks of it.
struct SoftLevels {
  double pos = 0.0;
  double neg = 0.0;
};
SoftLevels soft_levels(const CellConfig& cfg, double w);

/// d(soft level)/dw where the clip is not saturated, else 0. The same
/// expression serves both signs.
double soft_level_grad(const CellConfig& cfg, double w);

/// Squared distance between two same-shape blocks in rounded level space,
/// levels normalized by max_level: sum over cells of (lt+_a - lt+_b)^2 +
/// (lt-_a - lt-_b)^2.
double level_distance(const CellConfig& cfg, const Matrix& w, const Matrix& ref);

/// Blocks sharing one PTC; the group mean block is the matching target.
using BlockGroup = std::vector<Matrix>;
using BlockGroups = std::vector<BlockGroup>;

/// Sum over groups and blocks of level_distance(block, group mean) divided
/// by the block cell count.
double block_matching_loss(const CellConfig& cfg, const BlockGroups& groups);

/// Analytic gradient of the smooth surrogate of block_matching_loss (soft
/// levels on both the block and the frozen mean reference; the mean is a
/// stop-gradient constant). Same shape as the input groups.
BlockGroups grad_block_matching(const CellConfig& cfg, const BlockGroups& groups);

/// Each PTC's step values as one group.
BlockGroups layer_groups(const LayerSchedule& schedule);

struct ToyConfig {
  int bits = 4;
  double base = 0.5;
  int k = 8;
  double lambda = 0.0;
  std::uint64_t seed = 1;
  int epochs = 60;
  double learning_rate = 0.05;
  double momentum = 0.9;
  int batch_size = 64;
  int train_samples = 512;
  int test_samples = 256;
  double blob_spread = 8.0;
  std::vector<int> dims{64, 32, 16, 3};
};

/// Samples are columns: x is features x n.
struct Dataset {
  Matrix x;
  std::vector<int> labels;
};

Dataset make_blobs(std::uint64_t seed, int features, int classes, int samples, double spread);

struct ToyModel {
  std::vector<Matrix> weights;  // weights[l] is dims[l+1] x dims[l]
  std::vector<std::vector<double>> biases;

  static ToyModel init(const std::vector<int>& dims, std::uint64_t seed);
};

struct ForwardBackward {
  double ce_loss = 0.0;
  std::vector<Matrix> grad_weights;  // w.r.t. the quantized weights
  std::vector<std::vector<double>> grad_biases;
};

struct ForwardOptions {
  bool bypass_quantizer = false;  // plain float path for reference checks
};

/// ReLU MLP forward/backward with weights passed through
/// quantize(normalize(W)) and a straight-through estimator. Softmax cross
/// entropy, mean over the batch.
ForwardBackward quantized_forward_backward(const ToyModel& model, const CellConfig& cfg,
                                           const Matrix& x, const std::vector<int>& labels,
                                           const ForwardOptions& opts = {});

/// Test accuracy of the quantized (or bypass) forward pass.
double evaluate(const ToyModel& model, const CellConfig& cfg, const Dataset& data,
                const ForwardOptions& opts = {});

struct TrainRow {
  double lambda = 0.0;
  double accuracy = 0.0;
  double final_ce = 0.0;
  bool diverged = false;
  std::uint64_t total_writes = 0;
  std::uint64_t max_writes = 0;
  double energy_units = 0.0;
  std::uint64_t total_writes_reordered = 0;
  std::uint64_t max_writes_reordered = 0;
  double energy_units_reordered = 0.0;
};

/// Train the toy classifier with the write-aware penalty weight
/// config.lambda, then deploy the final weights and count writes with
/// column reordering off and on.
TrainRow train_toy(const ToyConfig& config);

}  // namespace elight
