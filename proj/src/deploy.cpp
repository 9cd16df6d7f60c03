#include "elight/deploy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "elight/parallel.hpp"

namespace elight {

Matrix conv_to_gemm(const ConvShape& shape, const std::vector<double>& weights) {
  std::size_t per_out = shape.in_ch * shape.kh * shape.kw;
  if (shape.out_ch == 0 || per_out == 0) throw std::invalid_argument("empty conv shape");
  if (weights.size() != shape.out_ch * per_out)
    throw std::invalid_argument("conv weight count does not match shape");
  // Row-major O,I,Kh,Kw layout: each output channel is already one
  // contiguous im2col row.
  Matrix m(shape.out_ch, per_out);
  std::copy(weights.begin(), weights.end(), m.data.begin());
  return m;
}

Matrix BlockGrid::block(std::size_t p, std::size_t q) const {
  if (p >= block_rows || q >= block_cols) throw std::out_of_range("block index out of grid");
  Matrix b(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) b(i, j) = padded(p * k + i, q * k + j);
  return b;
}

Matrix BlockGrid::reassemble() const {
  Matrix m(orig_rows, orig_cols);
  for (std::size_t r = 0; r < orig_rows; ++r)
    for (std::size_t c = 0; c < orig_cols; ++c) m(r, c) = padded(r, c);
  return m;
}

BlockGrid partition(const Matrix& w, int k) {
  if (k < 1) throw std::invalid_argument("PTC size must be >= 1");
  if (w.rows == 0 || w.cols == 0) throw std::invalid_argument("cannot partition an empty matrix");
  BlockGrid grid;
  grid.k = k;
  grid.orig_rows = w.rows;
  grid.orig_cols = w.cols;
  grid.block_rows = (w.rows + k - 1) / k;
  grid.block_cols = (w.cols + k - 1) / k;
  grid.padded = Matrix(grid.block_rows * k, grid.block_cols * k);
  for (std::size_t r = 0; r < w.rows; ++r)
    for (std::size_t c = 0; c < w.cols; ++c) grid.padded(r, c) = w(r, c);
  return grid;
}

LayerSchedule assign(const BlockGrid& grid, int ptc_count) {
  if (ptc_count < 0) throw std::invalid_argument("ptc_count must be >= 0");
  LayerSchedule sched;
  sched.k = grid.k;
  sched.weight_rows = grid.orig_rows;
  sched.weight_cols = grid.orig_cols;
  std::size_t n_ptcs = ptc_count == 0 ? grid.block_rows : static_cast<std::size_t>(ptc_count);
  sched.ptcs.resize(n_ptcs);
  for (std::size_t p = 0; p < grid.block_rows; ++p) {
    PtcSequence& seq = sched.ptcs[p % n_ptcs];
    for (std::size_t q = 0; q < grid.block_cols; ++q)
      seq.steps.push_back({grid.block(p, q), static_cast<int>(p), static_cast<int>(q)});
  }
  return sched;
}

namespace {

void quantize_inputs(Matrix& x, const ExecuteOptions& opts) {
  double range = std::max(max_abs(x), opts.running_max);
  if (range <= 0.0) return;
  // Symmetric mid-tread grid with 2^b - 1 levels keeps zero exact.
  double half = static_cast<double>((1 << (opts.activation_bits - 1)) - 1);
  double step = range / half;
  for (double& v : x.data) {
    double q = std::round(v / step);
    q = std::clamp(q, -half, half);
    v = q * step;
  }
}

}  // namespace

Matrix execute_layer(const LayerSchedule& schedule, const Matrix& inputs,
                     const ExecuteOptions& opts) {
  int k = schedule.k;
  if (k < 1) throw std::invalid_argument("schedule has no PTC size");
  if (inputs.rows != schedule.weight_cols)
    throw std::invalid_argument("input rows do not match layer width");
  std::size_t m = inputs.cols;
  std::size_t block_rows = (schedule.weight_rows + k - 1) / k;
  std::size_t block_cols = (schedule.weight_cols + k - 1) / k;

  Matrix x = inputs;
  if (opts.quantize_activations) quantize_inputs(x, opts);
  Matrix xp(block_cols * k, m);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < m; ++c) xp(r, c) = x(r, c);

  Matrix out(block_rows * k, m);
  // Block rows are owned by exactly one PTC each, so PTCs touch disjoint
  // output bands.
  parallel_for(schedule.ptcs.size(), [&](std::size_t p) {
    const PtcSequence& seq = schedule.ptcs[p];
    for (std::size_t step = 0; step < seq.steps.size(); ++step) {
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          std::size_t cell = static_cast<std::size_t>(i) * k + j;
          std::size_t orig =
              seq.cell_perms.empty() ? step : static_cast<std::size_t>(seq.cell_perms[cell][step]);
          const ScheduledBlock& route = seq.steps[orig];
          double v = seq.steps[step].values(i, j);
          if (v == 0.0) continue;
          std::size_t out_row = static_cast<std::size_t>(route.block_row) * k + i;
          std::size_t in_row = static_cast<std::size_t>(route.block_col) * k + j;
          for (std::size_t c = 0; c < m; ++c) out(out_row, c) += v * xp(in_row, c);
        }
      }
    }
    if (!seq.row_assignment.empty()) {
      // Physical rows back to logical order inside every band this PTC owns.
      std::set<int> bands;
      for (const ScheduledBlock& s : seq.steps) bands.insert(s.block_row);
      for (int band : bands) {
        Matrix raw(k, m);
        for (int i = 0; i < k; ++i)
          for (std::size_t c = 0; c < m; ++c) raw(i, c) = out(static_cast<std::size_t>(band) * k + i, c);
        for (int logical = 0; logical < k; ++logical) {
          int physical = seq.row_assignment[logical];
          for (std::size_t c = 0; c < m; ++c)
            out(static_cast<std::size_t>(band) * k + logical, c) = raw(physical, c);
        }
      }
    }
  });

  Matrix cropped(schedule.weight_rows, m);
  for (std::size_t r = 0; r < cropped.rows; ++r)
    for (std::size_t c = 0; c < m; ++c) cropped(r, c) = out(r, c);
  return cropped;
}

NetworkWriteReport simulate_network(const NetworkModel& model, const CellConfig& cfg, int k,
                                    int ptc_count, const EnergyModel& energy) {
  NetworkWriteReport report;
  for (const NetworkLayer& layer : model.layers) {
    LayerSchedule sched = assign(partition(layer.weights, k), ptc_count);
    WriteStats stats = layer_writes(cfg, sched, energy);
    report.totals.total_writes += stats.total_writes;
    report.totals.max_cell_writes += stats.max_cell_writes;
    report.totals.writes_c_to_a += stats.writes_c_to_a;
    report.totals.writes_a_to_c += stats.writes_a_to_c;
    report.totals.energy_units += stats.energy_units;
    report.layers.push_back({layer.name, stats});
  }
  return report;
}

}  // namespace elight
