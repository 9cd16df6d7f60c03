#include "elight/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "elight/deploy.hpp"
#include "elight/reorder.hpp"

namespace elight {

Matrix normalize_weights(const Matrix& w) {
  Matrix out(w.rows, w.cols);
  double peak = 0.0;
  for (std::size_t i = 0; i < w.data.size(); ++i) {
    out.data[i] = std::tanh(w.data[i]);
    peak = std::max(peak, std::abs(out.data[i]));
  }
  if (peak == 0.0) return out;
  for (double& v : out.data) v /= peak;
  return out;
}

SoftLevels soft_levels(const CellConfig& cfg, double w) {
  double e = level_exponent(cfg, std::abs(w));
  e = std::clamp(e, 0.0, static_cast<double>(cfg.max_level));
  double alpha = cfg.max_level;
  if (w < 0.0) return {0.0, (e - alpha) / alpha};
  return {(alpha - e) / alpha, 0.0};
}

double soft_level_grad(const CellConfig& cfg, double w) {
  double e = level_exponent(cfg, std::abs(w));
  if (e <= 0.0 || e >= cfg.max_level) return 0.0;  // clip saturated
  return -cfg.scale / (cfg.max_level * cfg.log_base * (cfg.scale * std::abs(w) + cfg.floor_trans));
}

double level_distance(const CellConfig& cfg, const Matrix& w, const Matrix& ref) {
  if (!w.same_shape(ref)) throw std::invalid_argument("level distance needs same-shape blocks");
  double alpha = cfg.max_level;
  double sum = 0.0;
  for (std::size_t i = 0; i < w.data.size(); ++i) {
    LevelPair a = weight_levels(cfg, w.data[i]);
    LevelPair b = weight_levels(cfg, ref.data[i]);
    double dp = (a.pos - b.pos) / alpha;
    double dn = (a.neg - b.neg) / alpha;
    sum += dp * dp + dn * dn;
  }
  return sum;
}

namespace {

Matrix group_mean(const BlockGroup& group) {
  Matrix mean(group.front().rows, group.front().cols);
  for (const Matrix& b : group) {
    if (!b.same_shape(mean)) throw std::invalid_argument("group blocks differ in shape");
    for (std::size_t i = 0; i < mean.data.size(); ++i) mean.data[i] += b.data[i];
  }
  for (double& v : mean.data) v /= static_cast<double>(group.size());
  return mean;
}

}  // namespace

double block_matching_loss(const CellConfig& cfg, const BlockGroups& groups) {
  double total = 0.0;
  for (const BlockGroup& group : groups) {
    if (group.empty()) continue;
    Matrix mean = group_mean(group);
    double beta = static_cast<double>(mean.data.size());  // cells per block
    double sum = 0.0;
    for (const Matrix& b : group) sum += level_distance(cfg, b, mean);
    total += sum / beta;
  }
  return total;
}

BlockGroups grad_block_matching(const CellConfig& cfg, const BlockGroups& groups) {
  BlockGroups grads;
  grads.reserve(groups.size());
  for (const BlockGroup& group : groups) {
    BlockGroup group_grads;
    if (group.empty()) {
      grads.push_back(group_grads);
      continue;
    }
    Matrix mean = group_mean(group);  // stop-gradient reference
    double inv_beta = 1.0 / static_cast<double>(mean.data.size());
    for (const Matrix& b : group) {
      if (!b.same_shape(mean)) throw std::invalid_argument("group blocks differ in shape");
      Matrix g(b.rows, b.cols);
      for (std::size_t i = 0; i < b.data.size(); ++i) {
        double w = b.data[i];
        SoftLevels sw = soft_levels(cfg, w);
        SoftLevels sm = soft_levels(cfg, mean.data[i]);
        double slope = soft_level_grad(cfg, w);
        double active = w < 0.0 ? sw.neg - sm.neg : sw.pos - sm.pos;
        g.data[i] = 2.0 * inv_beta * active * slope;
      }
      group_grads.push_back(std::move(g));
    }
    grads.push_back(std::move(group_grads));
  }
  return grads;
}

BlockGroups layer_groups(const LayerSchedule& schedule) {
  BlockGroups groups;
  groups.reserve(schedule.ptcs.size());
  for (const PtcSequence& seq : schedule.ptcs) {
    BlockGroup group;
    group.reserve(seq.steps.size());
    for (const ScheduledBlock& s : seq.steps) group.push_back(s.values);
    groups.push_back(std::move(group));
  }
  return groups;
}

Dataset make_blobs(std::uint64_t seed, int features, int classes, int samples, double spread) {
  if (features < 1 || classes < 1 || samples < 1) throw std::invalid_argument("empty blob spec");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix centers(classes, features);
  double center_scale = spread / std::sqrt(static_cast<double>(features));
  for (double& v : centers.data) v = center_scale * normal(rng);
  Dataset data;
  data.x = Matrix(features, samples);
  data.labels.resize(samples);
  for (int i = 0; i < samples; ++i) {
    int cls = i % classes;
    data.labels[i] = cls;
    for (int f = 0; f < features; ++f)
      data.x(f, i) = centers(cls, f) + normal(rng);
  }
  return data;
}

ToyModel ToyModel::init(const std::vector<int>& dims, std::uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("toy model needs at least two layer sizes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ToyModel m;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    double scl = std::sqrt(2.0 / dims[l]);
    Matrix w(dims[l + 1], dims[l]);
    for (double& v : w.data) v = scl * normal(rng);
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(dims[l + 1], 0.0);
  }
  return m;
}

namespace {

Matrix quantize_matrix(const CellConfig& cfg, const Matrix& w) {
  Matrix out = normalize_weights(w);
  for (double& v : out.data) v = quantize(cfg, v).value;
  return out;
}

struct ForwardTrace {
  std::vector<Matrix> activations;  // activations[0] = x, then post-ReLU / logits
  Matrix probs;                     // softmax over the last logits
};

ForwardTrace forward(const std::vector<Matrix>& wq, const std::vector<std::vector<double>>& biases,
                     const Matrix& x) {
  ForwardTrace t;
  t.activations.push_back(x);
  std::size_t layers = wq.size();
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix z = matmul(wq[l], t.activations.back());
    for (std::size_t r = 0; r < z.rows; ++r)
      for (std::size_t c = 0; c < z.cols; ++c) z(r, c) += biases[l][r];
    if (l + 1 < layers)
      for (double& v : z.data) v = std::max(v, 0.0);
    t.activations.push_back(std::move(z));
  }
  const Matrix& logits = t.activations.back();
  t.probs = Matrix(logits.rows, logits.cols);
  for (std::size_t c = 0; c < logits.cols; ++c) {
    double peak = logits(0, c);
    for (std::size_t r = 1; r < logits.rows; ++r) peak = std::max(peak, logits(r, c));
    double denom = 0.0;
    for (std::size_t r = 0; r < logits.rows; ++r) {
      t.probs(r, c) = std::exp(logits(r, c) - peak);
      denom += t.probs(r, c);
    }
    for (std::size_t r = 0; r < logits.rows; ++r) t.probs(r, c) /= denom;
  }
  return t;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
  return t;
}

}  // namespace

ForwardBackward quantized_forward_backward(const ToyModel& model, const CellConfig& cfg,
                                           const Matrix& x, const std::vector<int>& labels,
                                           const ForwardOptions& opts) {
  if (x.cols != labels.size()) throw std::invalid_argument("batch size does not match labels");
  std::size_t layers = model.weights.size();
  std::vector<Matrix> wq;
  wq.reserve(layers);
  for (const Matrix& w : model.weights)
    wq.push_back(opts.bypass_quantizer ? w : quantize_matrix(cfg, w));

  ForwardTrace t = forward(wq, model.biases, x);

  double n = static_cast<double>(x.cols);
  ForwardBackward fb;
  fb.ce_loss = 0.0;
  for (std::size_t c = 0; c < x.cols; ++c)
    fb.ce_loss -= std::log(std::max(t.probs(labels[c], c), 1e-300));
  fb.ce_loss /= n;

  Matrix dz = t.probs;
  for (std::size_t c = 0; c < x.cols; ++c) dz(labels[c], c) -= 1.0;
  for (double& v : dz.data) v /= n;

  fb.grad_weights.resize(layers);
  fb.grad_biases.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    fb.grad_weights[l] = matmul(dz, transpose(t.activations[l]));
    fb.grad_biases[l].assign(dz.rows, 0.0);
    for (std::size_t r = 0; r < dz.rows; ++r)
      for (std::size_t c = 0; c < dz.cols; ++c) fb.grad_biases[l][r] += dz(r, c);
    if (l > 0) {
      Matrix da = matmul(transpose(wq[l]), dz);
      for (std::size_t i = 0; i < da.data.size(); ++i)
        da.data[i] = t.activations[l].data[i] > 0.0 ? da.data[i] : 0.0;
      dz = std::move(da);
    }
  }
  return fb;
}

double evaluate(const ToyModel& model, const CellConfig& cfg, const Dataset& data,
                const ForwardOptions& opts) {
  std::vector<Matrix> wq;
  for (const Matrix& w : model.weights)
    wq.push_back(opts.bypass_quantizer ? w : quantize_matrix(cfg, w));
  ForwardTrace t = forward(wq, model.biases, data.x);
  int hits = 0;
  for (std::size_t c = 0; c < data.x.cols; ++c) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < t.probs.rows; ++r)
      if (t.probs(r, c) > t.probs(best, c)) best = r;
    if (static_cast<int>(best) == data.labels[c]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.x.cols);
}

namespace {

// Block coordinates of each PTC group for one layer shape, so penalty
// gradients can be gathered and scattered without rebuilding schedules.
struct GroupLayout {
  struct Coord {
    std::size_t p, q;
  };
  std::vector<std::vector<Coord>> groups;
};

GroupLayout layer_layout(std::size_t rows, std::size_t cols, int k) {
  GroupLayout layout;
  std::size_t block_rows = (rows + k - 1) / k;
  std::size_t block_cols = (cols + k - 1) / k;
  layout.groups.resize(block_rows);
  for (std::size_t p = 0; p < block_rows; ++p)
    for (std::size_t q = 0; q < block_cols; ++q) layout.groups[p].push_back({p, q});
  return layout;
}

BlockGroups gather_groups(const Matrix& w, const GroupLayout& layout, int k) {
  BlockGroups groups;
  for (const auto& coords : layout.groups) {
    BlockGroup group;
    for (auto [p, q] : coords) {
      Matrix b(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          std::size_t r = p * k + i, c = q * k + j;
          if (r < w.rows && c < w.cols) b(i, j) = w(r, c);
        }
      group.push_back(std::move(b));
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

void scatter_groups(Matrix& target, const BlockGroups& grads, const GroupLayout& layout, int k,
                    double scale) {
  for (std::size_t g = 0; g < layout.groups.size(); ++g)
    for (std::size_t b = 0; b < layout.groups[g].size(); ++b) {
      auto [p, q] = layout.groups[g][b];
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          std::size_t r = p * k + i, c = q * k + j;
          if (r < target.rows && c < target.cols) target(r, c) += scale * grads[g][b](i, j);
        }
    }
}

}  // namespace

TrainRow train_toy(const ToyConfig& config) {
  CellConfig cfg = CellConfig::from_base(config.bits, config.base);
  if (config.k < 1 || config.epochs < 1 || config.batch_size < 1)
    throw std::invalid_argument("invalid toy training config");

  int classes = config.dims.back();
  Dataset all = make_blobs(config.seed, config.dims.front(), classes,
                           config.train_samples + config.test_samples, config.blob_spread);
  Dataset train{Matrix(all.x.rows, config.train_samples), {}};
  Dataset test{Matrix(all.x.rows, config.test_samples), {}};
  for (std::size_t r = 0; r < all.x.rows; ++r) {
    for (int c = 0; c < config.train_samples; ++c) train.x(r, c) = all.x(r, c);
    for (int c = 0; c < config.test_samples; ++c) test.x(r, c) = all.x(r, config.train_samples + c);
  }
  train.labels.assign(all.labels.begin(), all.labels.begin() + config.train_samples);
  test.labels.assign(all.labels.begin() + config.train_samples, all.labels.end());

  ToyModel model = ToyModel::init(config.dims, config.seed + 1);
  std::vector<Matrix> velocity;
  std::vector<GroupLayout> layouts;
  for (const Matrix& w : model.weights) {
    velocity.emplace_back(w.rows, w.cols);
    layouts.push_back(layer_layout(w.rows, w.cols, config.k));
  }

  TrainRow row;
  row.lambda = config.lambda;
  std::mt19937_64 shuffle_rng(config.seed + 2);
  std::vector<int> order(config.train_samples);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs && !row.diverged; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (int start = 0; start < config.train_samples; start += config.batch_size) {
      int stop = std::min(config.train_samples, start + config.batch_size);
      Matrix xb(train.x.rows, stop - start);
      std::vector<int> yb(stop - start);
      for (int c = start; c < stop; ++c) {
        yb[c - start] = train.labels[order[c]];
        for (std::size_t r = 0; r < train.x.rows; ++r) xb(r, c - start) = train.x(r, order[c]);
      }
      ForwardBackward fb = quantized_forward_backward(model, cfg, xb, yb);
      row.final_ce = fb.ce_loss;
      if (!std::isfinite(fb.ce_loss)) {
        row.diverged = true;
        break;
      }
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Matrix& g = fb.grad_weights[l];
        if (config.lambda != 0.0) {
          // Straight-through: the tanh normalization is identity backward.
          BlockGroups groups =
              gather_groups(normalize_weights(model.weights[l]), layouts[l], config.k);
          scatter_groups(g, grad_block_matching(cfg, groups), layouts[l], config.k, config.lambda);
        }
        for (std::size_t i = 0; i < g.data.size(); ++i) {
          velocity[l].data[i] =
              config.momentum * velocity[l].data[i] - config.learning_rate * g.data[i];
          model.weights[l].data[i] += velocity[l].data[i];
        }
        for (std::size_t r = 0; r < model.biases[l].size(); ++r) {
          model.biases[l][r] -= config.learning_rate * fb.grad_biases[l][r];
        }
      }
    }
  }

  row.accuracy = evaluate(model, cfg, test);

  for (const Matrix& w : model.weights) {
    LayerSchedule sched = assign(partition(normalize_weights(w), config.k));
    WriteStats off = layer_writes(cfg, sched);
    WriteStats on = layer_writes(cfg, column_reorder(sched));
    row.total_writes += off.total_writes;
    row.max_writes = std::max(row.max_writes, off.max_cell_writes);
    row.energy_units += off.energy_units;
    row.total_writes_reordered += on.total_writes;
    row.max_writes_reordered = std::max(row.max_writes_reordered, on.max_cell_writes);
    row.energy_units_reordered += on.energy_units;
  }
  return row;
}

}  // namespace elight
