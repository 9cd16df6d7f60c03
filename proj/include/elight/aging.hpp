#pragma once

#include <cstdint>
#include <vector>

#include "elight/cell.hpp"
#include "elight/matrix.hpp"
#include "elight/schedule.hpp"
#include "elight/write.hpp"

namespace elight {

/// Stuck-at-c wire counts per cell of one PTC, row-major k x k per array.
struct AgedProfile {
  int k = 0;
  std::vector<std::uint32_t> f_pos;
  std::vector<std::uint32_t> f_neg;

  static AgedProfile zeros(int k);
  bool fresh() const;
};

/// Pin every wire whose wear reached `endurance` to the crystalline state
/// (the safe retirement state) without counting writes, and report the
/// stuck counts. Idempotent. endurance == 0 ages nothing.
AgedProfile inject_aging(PtcState& ptc, std::uint64_t endurance);

struct WeightRange {
  double lo = -1.0;
  double hi = 1.0;
};

/// Weights a cell still reaches when the first f_pos / f_neg wires of its
/// arrays are stuck at c: [-(c^f_neg - floor)/scale, (c^f_pos - floor)/scale].
WeightRange supported_range(const CellConfig& cfg, std::uint32_t f_pos, std::uint32_t f_neg);

/// Nearest representable weight inside the supported range: clip then
/// quantize. Range endpoints are codebook entries, so the result is always
/// programmable on the aged cell.
double clamp_program(const CellConfig& cfg, const WeightRange& range, double w);

/// Verbatim reproduces a published deviation formula whose second term
/// repeats the max comparison; Corrected (default) compares minima there.
enum class DeviationForm { Corrected, Verbatim };

/// Worst-case programming deviation of placing a block row with per-cell
/// value ranges `needed` onto a physical row with supported ranges `given`:
/// sum over cells of the range overhang outside the supported interval.
double mapping_deviation(const std::vector<WeightRange>& needed,
                         const std::vector<WeightRange>& given,
                         DeviationForm form = DeviationForm::Corrected);

/// Per (row, column) min/max of the values a cell programs across the
/// sequence, row-major k x k.
std::vector<WeightRange> row_range_summary(const PtcSequence& seq, int k);

/// Supported ranges of every physical cell under a profile, row-major.
std::vector<WeightRange> ptc_cell_ranges(const CellConfig& cfg, const AgedProfile& profile);

struct Assignment {
  std::vector<int> row_to_col;
  double cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix, O(n^3). Among
/// equal-cost optima the lexicographically smallest row_to_col wins, so an
/// all-tie matrix (e.g. a fresh PTC) yields the identity.
Assignment hungarian(const Matrix& cost);

struct RowOrder {
  std::vector<int> assignment;  // logical block row -> physical PTC row
  std::vector<int> inverse;
  double cost = 0.0;
};

struct RemapResult {
  RowOrder order;
  PtcSequence sequence;
};

/// Deviation-minimizing row placement for one PTC: build the k x k mapping
/// deviation matrix, match with hungarian, and move block rows (and their
/// permutations) to their physical rows. The mapping deviation is a range
/// surrogate; if its optimum would realize a larger per-step deviation than
/// leaving the rows alone, the identity order is kept, so the realized
/// deviation never exceeds the unmapped layout's. Requires a column-sorted
/// sequence so per-cell ranges summarize the whole schedule.
RemapResult remap_rows(const PtcSequence& seq, int k, const AgedProfile& profile,
                       const CellConfig& cfg, DeviationForm form = DeviationForm::Corrected);

struct LayerRemap {
  LayerSchedule schedule;
  std::vector<RowOrder> orders;  // one per PTC
};

LayerRemap remap_layer(const LayerSchedule& schedule, const std::vector<AgedProfile>& profiles,
                       const CellConfig& cfg, DeviationForm form = DeviationForm::Corrected);

/// Replace every value by clamp_program under its physical cell's range.
PtcSequence clamp_sequence(const PtcSequence& seq, int k, const AgedProfile& profile,
                           const CellConfig& cfg);

/// Sum over cells and steps of |programmed - requested| when the sequence
/// runs on the aged PTC as laid out.
double realized_deviation(const PtcSequence& seq, int k, const AgedProfile& profile,
                          const CellConfig& cfg);

}  // namespace elight
