#include "elight/write.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "elight/aging.hpp"
#include "elight/parallel.hpp"

namespace elight {

namespace {

int usable_wires(const WireArray& a) {
  int n = 0;
  for (std::size_t i = 0; i < a.stuck.size(); ++i)
    if (!a.stuck[i]) ++n;
  return n;
}

// Flip `count` wires of `a` that currently hold state `from`, wear-levelled:
// lowest wear first, ties on the lowest index.
void toggle_wires(WireArray& a, int count, std::uint8_t from) {
  for (int done = 0; done < count; ++done) {
    std::size_t pick = a.amorphous.size();
    for (std::size_t i = 0; i < a.amorphous.size(); ++i) {
      if (a.stuck[i] || a.amorphous[i] != from) continue;
      if (pick == a.amorphous.size() || a.wear[i] < a.wear[pick]) pick = i;
    }
    if (pick == a.amorphous.size())
      throw std::logic_error("no programmable wire left for requested toggle");
    a.amorphous[pick] ^= 1;
    ++a.wear[pick];
  }
}

// Drive one array to `target` amorphous wires, capped at what stuck wires
// still allow. Returns (c_to_a, a_to_c) toggle counts.
std::pair<std::uint64_t, std::uint64_t> program_array(WireArray& a, int target) {
  target = std::min(target, usable_wires(a));
  int delta = target - a.a_count();
  if (delta > 0) {
    toggle_wires(a, delta, 0);
    return {static_cast<std::uint64_t>(delta), 0};
  }
  if (delta < 0) {
    toggle_wires(a, -delta, 1);
    return {0, static_cast<std::uint64_t>(-delta)};
  }
  return {0, 0};
}

}  // namespace

int WireArray::a_count() const {
  return static_cast<int>(std::count(amorphous.begin(), amorphous.end(), std::uint8_t{1}));
}

CellState CellState::fresh(const CellConfig& cfg) {
  CellState s;
  std::size_t n = static_cast<std::size_t>(cfg.wire_count());
  for (WireArray* a : {&s.pos, &s.neg}) {
    a->amorphous.assign(n, 0);
    a->wear.assign(n, 0);
    a->stuck.assign(n, 0);
  }
  return s;
}

LevelPair CellState::level() const { return {pos.a_count(), -neg.a_count()}; }

ProgramDelta program_cell(CellState& cell, LevelPair target) {
  auto [ca_p, ac_p] = program_array(cell.pos, target.pos);
  auto [ca_n, ac_n] = program_array(cell.neg, -target.neg);
  ProgramDelta d;
  d.c_to_a = ca_p + ca_n;
  d.a_to_c = ac_p + ac_n;
  d.writes = d.c_to_a + d.a_to_c;
  return d;
}

std::uint64_t write_cost(const CellConfig& cfg, double w_new, double w_old) {
  LevelPair n = weight_levels(cfg, w_new);
  LevelPair o = weight_levels(cfg, w_old);
  return static_cast<std::uint64_t>(std::abs(n.pos - o.pos)) +
         static_cast<std::uint64_t>(std::abs(n.neg - o.neg));
}

std::uint64_t block_write_cost(const CellConfig& cfg, const Matrix& next, const Matrix& prev) {
  if (!next.same_shape(prev)) throw std::invalid_argument("block shapes differ");
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < next.data.size(); ++i)
    sum += write_cost(cfg, next.data[i], prev.data[i]);
  return sum;
}

double EnergyModel::energy_a_to_c() const {
  return crystallize.pulses * crystallize.voltage_v * crystallize.voltage_v /
         heater_resistance * crystallize.period_us;
}

double EnergyModel::energy_c_to_a() const {
  return amorphize.pulses * amorphize.voltage_v * amorphize.voltage_v / heater_resistance *
         amorphize.period_us;
}

double write_energy(const WriteStats& stats, const EnergyModel& model) {
  return static_cast<double>(stats.writes_a_to_c) * model.energy_a_to_c() +
         static_cast<double>(stats.writes_c_to_a) * model.energy_c_to_a();
}

PtcState::PtcState(const CellConfig& cfg, int k) : config(cfg), size(k) {
  if (k < 1) throw std::invalid_argument("PTC size must be >= 1");
  cells.assign(static_cast<std::size_t>(k) * k, CellState::fresh(cfg));
  cell_writes.assign(cells.size(), 0);
}

ProgramDelta PtcState::program_block(const Matrix& block) {
  if (block.rows != static_cast<std::size_t>(size) || block.cols != static_cast<std::size_t>(size))
    throw std::invalid_argument("block does not match PTC size");
  ProgramDelta total;
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    ProgramDelta d = program_cell(cells[idx], weight_levels(config, block.data[idx]));
    cell_writes[idx] += d.writes;
    total.writes += d.writes;
    total.c_to_a += d.c_to_a;
    total.a_to_c += d.a_to_c;
  }
  c_to_a += total.c_to_a;
  a_to_c += total.a_to_c;
  return total;
}

std::uint64_t PtcState::max_cell_writes() const {
  return cell_writes.empty() ? 0 : *std::max_element(cell_writes.begin(), cell_writes.end());
}

void PtcState::apply_stuck_profile(const AgedProfile& profile) {
  if (profile.k != size) throw std::invalid_argument("aged profile does not match PTC size");
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    auto pin = [](WireArray& a, std::uint32_t count) {
      for (std::uint32_t i = 0; i < count && i < a.stuck.size(); ++i) {
        a.stuck[i] = 1;
        a.amorphous[i] = 0;
      }
    };
    pin(cells[idx].pos, profile.f_pos[idx]);
    pin(cells[idx].neg, profile.f_neg[idx]);
  }
}

WriteStats layer_writes(const CellConfig& cfg, const LayerSchedule& schedule,
                        const EnergyModel& energy, const std::vector<AgedProfile>* profiles) {
  if (profiles && profiles->size() != schedule.ptcs.size())
    throw std::invalid_argument("profile count does not match PTC count");
  struct PtcResult {
    std::uint64_t c_to_a = 0, a_to_c = 0, max_cell = 0;
  };
  std::vector<PtcResult> results(schedule.ptcs.size());
  parallel_for(schedule.ptcs.size(), [&](std::size_t p) {
    PtcState ptc(cfg, schedule.k);
    if (profiles) ptc.apply_stuck_profile((*profiles)[p]);
    for (const ScheduledBlock& step : schedule.ptcs[p].steps) ptc.program_block(step.values);
    results[p] = {ptc.c_to_a, ptc.a_to_c, ptc.max_cell_writes()};
  });
  WriteStats stats;
  for (const PtcResult& r : results) {
    stats.writes_c_to_a += r.c_to_a;
    stats.writes_a_to_c += r.a_to_c;
    stats.max_cell_writes = std::max(stats.max_cell_writes, r.max_cell);
  }
  stats.total_writes = stats.writes_c_to_a + stats.writes_a_to_c;
  stats.energy_units = write_energy(stats, energy);
  return stats;
}

}  // namespace elight
