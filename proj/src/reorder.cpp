#include "elight/reorder.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "elight/deploy.hpp"

namespace elight {

LayerSchedule column_reorder(const LayerSchedule& schedule) {
  if (schedule.has_cell_perms())
    throw std::invalid_argument("schedule is already column-reordered");
  if (schedule.has_row_assignment())
    throw std::invalid_argument("cannot reorder a row-remapped schedule");
  LayerSchedule out = schedule;
  int k = schedule.k;
  for (std::size_t p = 0; p < out.ptcs.size(); ++p) {
    const PtcSequence& src = schedule.ptcs[p];
    PtcSequence& dst = out.ptcs[p];
    std::size_t n_steps = src.steps.size();
    dst.cell_perms.assign(static_cast<std::size_t>(k) * k, {});
    if (n_steps == 0) continue;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        std::vector<int>& perm = dst.cell_perms[static_cast<std::size_t>(i) * k + j];
        perm.resize(n_steps);
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
          return src.steps[a].values(i, j) < src.steps[b].values(i, j);
        });
        for (std::size_t m = 0; m < n_steps; ++m)
          dst.steps[m].values(i, j) = src.steps[perm[m]].values(i, j);
      }
    }
  }
  return out;
}

double verify_equivalence(const LayerSchedule& original, const LayerSchedule& reordered,
                          const Matrix& inputs) {
  if (!reordered.has_cell_perms())
    throw std::invalid_argument("reordered schedule is missing permutations");
  Matrix want = execute_layer(original, inputs);
  Matrix got = execute_layer(reordered, inputs);
  return relative_residual(got, want);
}

int per_cell_write_bound(const CellConfig& cfg, bool include_initial) {
  return include_initial ? 3 * cfg.max_level : 2 * cfg.max_level;
}

}  // namespace elight
