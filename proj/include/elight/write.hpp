#pragma once

#include <cstdint>
#include <vector>

#include "elight/cell.hpp"
#include "elight/matrix.hpp"
#include "elight/schedule.hpp"

namespace elight {

struct AgedProfile;  // aging.hpp

/// One stack of binary wires. wear counts state toggles survived; a stuck
/// wire is pinned to the crystalline state and excluded from programming.
struct WireArray {
  std::vector<std::uint8_t> amorphous;
  std::vector<std::uint64_t> wear;
  std::vector<std::uint8_t> stuck;

  int a_count() const;
};

/// Runtime state of one differential cell: positive and negative wire array.
struct CellState {
  WireArray pos;
  WireArray neg;

  static CellState fresh(const CellConfig& cfg);
  LevelPair level() const;
};

struct ProgramDelta {
  std::uint64_t writes = 0;
  std::uint64_t c_to_a = 0;
  std::uint64_t a_to_c = 0;
};

/// Flip the minimum number of wires so the cell reaches `target`. Wire
/// selection is wear-levelled: among candidates the lowest wear wins, ties
/// break on the lowest index. If stuck wires make a target level
/// unreachable the achievable level closest to it is programmed instead.
ProgramDelta program_cell(CellState& cell, LevelPair target);

/// Wire toggles needed to reprogram a cell from w_old to w_new, both
/// quantized internally: |delta pos| + |delta neg|.
std::uint64_t write_cost(const CellConfig& cfg, double w_new, double w_old);

/// Sum of write_cost over all positions of two same-shape blocks.
std::uint64_t block_write_cost(const CellConfig& cfg, const Matrix& next, const Matrix& prev);

struct PulseProfile {
  double period_us = 0.0;
  double voltage_v = 0.0;
  int pulses = 0;
};

/// Per-write electrical cost of the two transition directions. Energy of one
/// write is pulses * V^2 / R * period, reported in V^2 us per unit heater
/// resistance.
struct EnergyModel {
  PulseProfile crystallize{1.0, 5.0, 20};  // a -> c
  PulseProfile amorphize{0.5, 15.0, 1};    // c -> a
  double heater_resistance = 1.0;

  double energy_a_to_c() const;
  double energy_c_to_a() const;
};

struct WriteStats {
  std::uint64_t total_writes = 0;
  std::uint64_t max_cell_writes = 0;
  std::uint64_t writes_c_to_a = 0;
  std::uint64_t writes_a_to_c = 0;
  double energy_units = 0.0;
};

double write_energy(const WriteStats& stats, const EnergyModel& model);

/// One k x k crossbar of cells with per-cell write counters.
struct PtcState {
  CellConfig config;
  int size = 0;
  std::vector<CellState> cells;
  std::vector<std::uint64_t> cell_writes;
  std::uint64_t c_to_a = 0;
  std::uint64_t a_to_c = 0;

  PtcState(const CellConfig& cfg, int k);

  CellState& cell(int r, int c) { return cells[static_cast<std::size_t>(r) * size + c]; }
  const CellState& cell(int r, int c) const {
    return cells[static_cast<std::size_t>(r) * size + c];
  }

  ProgramDelta program_block(const Matrix& block);
  std::uint64_t total_writes() const { return c_to_a + a_to_c; }
  std::uint64_t max_cell_writes() const;

  /// Pin the first f_pos / f_neg wires of each cell's arrays to c.
  void apply_stuck_profile(const AgedProfile& profile);
};

/// Program every PTC of a schedule through its full step sequence on fresh
/// hardware and aggregate the counters. With `profiles`, each PTC starts
/// with the given stuck wires (one profile per PTC).
WriteStats layer_writes(const CellConfig& cfg, const LayerSchedule& schedule,
                        const EnergyModel& energy = {},
                        const std::vector<AgedProfile>* profiles = nullptr);

}  // namespace elight
