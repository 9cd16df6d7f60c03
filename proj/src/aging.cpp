#include "elight/aging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace elight {

AgedProfile AgedProfile::zeros(int k) {
  AgedProfile p;
  p.k = k;
  p.f_pos.assign(static_cast<std::size_t>(k) * k, 0);
  p.f_neg.assign(static_cast<std::size_t>(k) * k, 0);
  return p;
}

bool AgedProfile::fresh() const {
  auto all_zero = [](const std::vector<std::uint32_t>& v) {
    return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
  };
  return all_zero(f_pos) && all_zero(f_neg);
}

AgedProfile inject_aging(PtcState& ptc, std::uint64_t endurance) {
  AgedProfile prof = AgedProfile::zeros(ptc.size);
  for (std::size_t idx = 0; idx < ptc.cells.size(); ++idx) {
    auto retire = [endurance](WireArray& a) -> std::uint32_t {
      std::uint32_t stuck = 0;
      for (std::size_t i = 0; i < a.wear.size(); ++i) {
        if (endurance > 0 && a.wear[i] >= endurance) {
          a.stuck[i] = 1;
          a.amorphous[i] = 0;  // retired to c, not a counted write
        }
        if (a.stuck[i]) ++stuck;
      }
      return stuck;
    };
    prof.f_pos[idx] = retire(ptc.cells[idx].pos);
    prof.f_neg[idx] = retire(ptc.cells[idx].neg);
  }
  return prof;
}

WeightRange supported_range(const CellConfig& cfg, std::uint32_t f_pos, std::uint32_t f_neg) {
  if (f_pos > static_cast<std::uint32_t>(cfg.wire_count()) ||
      f_neg > static_cast<std::uint32_t>(cfg.wire_count()))
    throw std::invalid_argument("stuck wire count exceeds wires per array");
  WeightRange r;
  r.hi = (transmission_level(cfg, static_cast<int>(f_pos)) - cfg.floor_trans) / cfg.scale;
  r.lo = -(transmission_level(cfg, static_cast<int>(f_neg)) - cfg.floor_trans) / cfg.scale;
  return r;
}

double clamp_program(const CellConfig& cfg, const WeightRange& range, double w) {
  return quantize(cfg, std::clamp(w, range.lo, range.hi)).value;
}

double mapping_deviation(const std::vector<WeightRange>& needed,
                         const std::vector<WeightRange>& given, DeviationForm form) {
  if (needed.size() != given.size()) throw std::invalid_argument("range row sizes differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < needed.size(); ++i) {
    if (form == DeviationForm::Corrected) {
      if (needed[i].hi > given[i].hi) sum += needed[i].hi - given[i].hi;
      if (needed[i].lo < given[i].lo) sum += given[i].lo - needed[i].lo;
    } else {
      if (needed[i].hi > given[i].hi) sum += std::abs(needed[i].hi - given[i].hi);
      if (needed[i].hi < given[i].hi) sum += std::abs(needed[i].hi - given[i].hi);
    }
  }
  return sum;
}

std::vector<WeightRange> row_range_summary(const PtcSequence& seq, int k) {
  std::vector<WeightRange> ranges(static_cast<std::size_t>(k) * k, WeightRange{0.0, 0.0});
  if (seq.steps.empty()) return ranges;
  for (std::size_t idx = 0; idx < ranges.size(); ++idx) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::size_t i = idx / k, j = idx % k;
    for (const ScheduledBlock& s : seq.steps) {
      lo = std::min(lo, s.values(i, j));
      hi = std::max(hi, s.values(i, j));
    }
    ranges[idx] = {lo, hi};
  }
  return ranges;
}

std::vector<WeightRange> ptc_cell_ranges(const CellConfig& cfg, const AgedProfile& profile) {
  std::vector<WeightRange> ranges(profile.f_pos.size());
  for (std::size_t idx = 0; idx < ranges.size(); ++idx)
    ranges[idx] = supported_range(cfg, profile.f_pos[idx], profile.f_neg[idx]);
  return ranges;
}

namespace {

// Shortest augmenting path assignment with potentials, O(n^3). p[j] is the
// row matched to column j (1-based with a virtual column 0).
std::vector<int> solve_assignment(const Matrix& a, double& cost, std::vector<double>* u_out,
                                  std::vector<double>* v_out) {
  int n = static_cast<int>(a.rows);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  cost = 0.0;
  for (int r = 0; r < n; ++r) cost += a(r, row_to_col[r]);
  if (u_out) *u_out = u;
  if (v_out) *v_out = v;
  return row_to_col;
}

}  // namespace

Assignment hungarian(const Matrix& cost) {
  if (cost.rows == 0 || cost.rows != cost.cols)
    throw std::invalid_argument("cost matrix must be square and nonempty");
  for (double v : cost.data)
    if (!std::isfinite(v)) throw std::invalid_argument("cost matrix has a non-finite entry");

  int n = static_cast<int>(cost.rows);
  double best_cost = 0.0;
  std::vector<double> u, v;
  std::vector<int> assign = solve_assignment(cost, best_cost, &u, &v);
  double eps = 1e-9 * (1.0 + max_abs(cost));

  // Lexicographic tightening: row by row, move to the smallest column that
  // keeps the total optimal. Only dual-tight edges can appear in an optimal
  // matching, which prunes the candidate columns.
  std::vector<char> taken(n, 0);
  double prefix = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < assign[r]; ++j) {
      if (taken[j]) continue;
      if (cost(r, j) - u[r + 1] - v[j + 1] > eps) continue;
      std::vector<int> free_cols;
      for (int c = 0; c < n; ++c)
        if (!taken[c] && c != j) free_cols.push_back(c);
      double sub_cost = 0.0;
      std::vector<int> sub;
      if (!free_cols.empty()) {
        Matrix subm(free_cols.size(), free_cols.size());
        for (int rr = r + 1; rr < n; ++rr)
          for (std::size_t cc = 0; cc < free_cols.size(); ++cc)
            subm(rr - r - 1, cc) = cost(rr, free_cols[cc]);
        sub = solve_assignment(subm, sub_cost, nullptr, nullptr);
      }
      if (prefix + cost(r, j) + sub_cost <= best_cost + eps) {
        assign[r] = j;
        for (int rr = r + 1; rr < n; ++rr) assign[rr] = free_cols[sub[rr - r - 1]];
        break;
      }
    }
    taken[assign[r]] = 1;
    prefix += cost(r, assign[r]);
  }

  Assignment result;
  result.row_to_col = assign;
  result.cost = prefix;
  return result;
}

namespace {

void check_column_sorted(const PtcSequence& seq, int k) {
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (std::size_t m = 1; m < seq.steps.size(); ++m)
        if (seq.steps[m].values(i, j) < seq.steps[m - 1].values(i, j))
          throw std::invalid_argument("sequence is not column-sorted; reorder before remapping");
}

}  // namespace

RemapResult remap_rows(const PtcSequence& seq, int k, const AgedProfile& profile,
                       const CellConfig& cfg, DeviationForm form) {
  if (profile.k != k) throw std::invalid_argument("aged profile does not match PTC size");
  if (!seq.row_assignment.empty()) throw std::invalid_argument("sequence is already remapped");
  check_column_sorted(seq, k);

  std::vector<WeightRange> needed = row_range_summary(seq, k);
  std::vector<WeightRange> given = ptc_cell_ranges(cfg, profile);
  Matrix cost(k, k);
  for (int m = 0; m < k; ++m) {
    std::vector<WeightRange> need_row(needed.begin() + static_cast<std::size_t>(m) * k,
                                      needed.begin() + static_cast<std::size_t>(m + 1) * k);
    for (int n = 0; n < k; ++n) {
      std::vector<WeightRange> give_row(given.begin() + static_cast<std::size_t>(n) * k,
                                        given.begin() + static_cast<std::size_t>(n + 1) * k);
      cost(m, n) = mapping_deviation(need_row, give_row, form);
    }
  }

  Assignment match = hungarian(cost);

  auto build = [&](const std::vector<int>& row_to_col) {
    PtcSequence dst;
    dst.steps = seq.steps;
    for (std::size_t s = 0; s < seq.steps.size(); ++s)
      for (int i = 0; i < k; ++i) {
        int physical = row_to_col[i];
        for (int j = 0; j < k; ++j) dst.steps[s].values(physical, j) = seq.steps[s].values(i, j);
      }
    if (!seq.cell_perms.empty()) {
      dst.cell_perms.assign(static_cast<std::size_t>(k) * k, {});
      for (int i = 0; i < k; ++i) {
        int physical = row_to_col[i];
        for (int j = 0; j < k; ++j)
          dst.cell_perms[static_cast<std::size_t>(physical) * k + j] =
              seq.cell_perms[static_cast<std::size_t>(i) * k + j];
      }
    }
    dst.row_assignment = row_to_col;
    return dst;
  };

  RemapResult result;
  result.sequence = build(match.row_to_col);

  // The deviation matrix scores each cell's range overhang once, but a
  // programmed sequence pays per step. When the surrogate optimum realizes
  // worse than leaving the rows alone, keep the identity order; it is
  // always feasible, so the realized deviation never regresses.
  if (realized_deviation(result.sequence, k, profile, cfg) >
      realized_deviation(seq, k, profile, cfg)) {
    match.row_to_col.assign(k, 0);
    std::iota(match.row_to_col.begin(), match.row_to_col.end(), 0);
    match.cost = 0.0;
    for (int m = 0; m < k; ++m) match.cost += cost(m, m);
    result.sequence = build(match.row_to_col);
  }

  result.order.assignment = match.row_to_col;
  result.order.cost = match.cost;
  result.order.inverse.assign(k, 0);
  for (int m = 0; m < k; ++m) result.order.inverse[match.row_to_col[m]] = m;
  return result;
}

LayerRemap remap_layer(const LayerSchedule& schedule, const std::vector<AgedProfile>& profiles,
                       const CellConfig& cfg, DeviationForm form) {
  if (profiles.size() != schedule.ptcs.size())
    throw std::invalid_argument("profile count does not match PTC count");
  LayerRemap out;
  out.schedule.k = schedule.k;
  out.schedule.weight_rows = schedule.weight_rows;
  out.schedule.weight_cols = schedule.weight_cols;
  for (std::size_t p = 0; p < schedule.ptcs.size(); ++p) {
    RemapResult r = remap_rows(schedule.ptcs[p], schedule.k, profiles[p], cfg, form);
    out.schedule.ptcs.push_back(std::move(r.sequence));
    out.orders.push_back(std::move(r.order));
  }
  return out;
}

PtcSequence clamp_sequence(const PtcSequence& seq, int k, const AgedProfile& profile,
                           const CellConfig& cfg) {
  std::vector<WeightRange> ranges = ptc_cell_ranges(cfg, profile);
  PtcSequence out = seq;
  for (ScheduledBlock& s : out.steps)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        s.values(i, j) = clamp_program(cfg, ranges[static_cast<std::size_t>(i) * k + j], s.values(i, j));
  return out;
}

double realized_deviation(const PtcSequence& seq, int k, const AgedProfile& profile,
                          const CellConfig& cfg) {
  std::vector<WeightRange> ranges = ptc_cell_ranges(cfg, profile);
  double sum = 0.0;
  for (const ScheduledBlock& s : seq.steps)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        double v = s.values(i, j);
        sum += std::abs(clamp_program(cfg, ranges[static_cast<std::size_t>(i) * k + j], v) -
                        quantize(cfg, v).value);
      }
  return sum;
}

}  // namespace elight
