#pragma once

#include "elight/cell.hpp"
#include "elight/matrix.hpp"
#include "elight/schedule.hpp"

namespace elight {

/// Independently sort every cell's value sequence ascending (stable, ties
/// keep original step order), recording per-cell permutations so inputs can
/// be rerouted. Routing metadata keeps its original step indexing. Rejects
/// schedules that already carry permutations or a row remapping.
LayerSchedule column_reorder(const LayerSchedule& schedule);

/// Relative residual between executing the original and the reordered
/// schedule on the same inputs. Rejects a `reordered` without permutations.
double verify_equivalence(const LayerSchedule& original, const LayerSchedule& reordered,
                          const Matrix& inputs);

/// Worst-case writes of one cell in a sorted sequence of any length:
/// 2^(b+1) - 2 excluding initial programming, 3 * (2^b - 1) including it.
int per_cell_write_bound(const CellConfig& cfg, bool include_initial = false);

}  // namespace elight
