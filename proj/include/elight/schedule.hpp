#pragma once

#include <cstddef>
#include <vector>

#include "elight/matrix.hpp"

namespace elight {

/// One k x k weight block staged on a PTC, tagged with its grid position:
/// block_row selects the output band, block_col the input band.
struct ScheduledBlock {
  Matrix values;
  int block_row = 0;
  int block_col = 0;
};

/// Ordered program sequence of one PTC. `steps` holds the values written at
/// each step. After column reordering the values of step m at cell (i, j)
/// came from original step cell_perms[i * k + j][m]; routing metadata
/// (block_row / block_col) stays indexed by original step. Empty cell_perms
/// means identity. row_assignment maps logical block row m to the physical
/// PTC row it occupies after remapping; empty means identity.
struct PtcSequence {
  std::vector<ScheduledBlock> steps;
  std::vector<std::vector<int>> cell_perms;
  std::vector<int> row_assignment;
};

struct LayerSchedule {
  int k = 0;
  std::size_t weight_rows = 0;
  std::size_t weight_cols = 0;
  std::vector<PtcSequence> ptcs;

  bool has_cell_perms() const {
    for (const auto& p : ptcs)
      if (!p.cell_perms.empty()) return true;
    return false;
  }
  bool has_row_assignment() const {
    for (const auto& p : ptcs)
      if (!p.row_assignment.empty()) return true;
    return false;
  }
};

}  // namespace elight
