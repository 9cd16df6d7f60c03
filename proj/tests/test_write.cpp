#include <doctest.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "elight/aging.hpp"
#include "elight/write.hpp"

using namespace elight;

namespace {

// k=1 layer holding one value per step on a single PTC.
LayerSchedule scalar_sequence(const std::vector<double>& values) {
  LayerSchedule s;
  s.k = 1;
  s.weight_rows = 1;
  s.weight_cols = values.size();
  PtcSequence seq;
  for (std::size_t q = 0; q < values.size(); ++q)
    seq.steps.push_back({Matrix(1, 1, values[q]), 0, static_cast<int>(q)});
  s.ptcs.push_back(seq);
  return s;
}

}  // namespace

TEST_CASE("write cost worked examples, b=2 c=0.5") {
  CellConfig cfg = CellConfig::from_base(2, 0.5);
  CHECK(write_cost(cfg, 0.3, 0.3) == 0);
  CHECK(write_cost(cfg, 3.0 / 7.0, -1.0 / 7.0) == 3);  // |2-0| + |0-(-1)|
  CHECK(write_cost(cfg, 1.0, 0.0) == 3);               // all-c zero to (3,0)
  CHECK(write_cost(cfg, -1.0 / 7.0, 3.0 / 7.0) == 3);  // symmetric
  CHECK(write_cost(cfg, 0.3, 0.35) == 0);              // same level pair
  CHECK_THROWS_AS(write_cost(cfg, 1.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(write_cost(cfg, 0.0, -1.01), std::domain_error);
}

TEST_CASE("block write cost sums cells") {
  CellConfig cfg = CellConfig::from_base(2, 0.5);
  Matrix a(1, 1, 3.0 / 7.0);
  Matrix b(1, 1, -1.0 / 7.0);
  CHECK(block_write_cost(cfg, a, a) == 0);
  CHECK(block_write_cost(cfg, a, b) == 3);

  Matrix zeros(2, 2, 0.0);
  Matrix ones(2, 2, 1.0);
  CHECK(block_write_cost(cfg, ones, zeros) == 12);  // 4 cells x 3 writes
  CHECK(block_write_cost(cfg, zeros, ones) == 12);

  Matrix tall(2, 1, 0.0);
  CHECK_THROWS_AS(block_write_cost(cfg, tall, zeros), std::invalid_argument);
}

TEST_CASE("program_cell worked transitions") {
  CellConfig cfg = CellConfig::from_base(2, 0.5);
  CellState cell = CellState::fresh(cfg);
  CHECK(cell.level() == LevelPair{0, 0});  // fresh is all crystalline

  ProgramDelta d = program_cell(cell, {0, 0});
  CHECK(d.writes == 0);
  CHECK(d.c_to_a == 0);
  CHECK(d.a_to_c == 0);

  d = program_cell(cell, {2, 0});  // two c->a flips on the positive array
  CHECK(d.writes == 2);
  CHECK(d.c_to_a == 2);
  CHECK(d.a_to_c == 0);
  CHECK(cell.level() == LevelPair{2, 0});

  program_cell(cell, {3, 0});
  d = program_cell(cell, {1, 0});  // two a->c flips
  CHECK(d.writes == 2);
  CHECK(d.c_to_a == 0);
  CHECK(d.a_to_c == 2);
  CHECK(cell.level() == LevelPair{1, 0});

  d = program_cell(cell, {0, -2});  // sign change touches both arrays
  CHECK(d.writes == 3);
  CHECK(d.c_to_a == 2);
  CHECK(d.a_to_c == 1);
  CHECK(cell.level() == LevelPair{0, -2});
}

TEST_CASE("second program of the Fig.-style level step costs the difference") {
  CellConfig cfg = CellConfig::from_base(3, 0.5);
  CellState cell = CellState::fresh(cfg);
  program_cell(cell, {5, 0});
  ProgramDelta d = program_cell(cell, {7, 0});
  CHECK(d.writes == 2);
  CHECK(d.c_to_a == 2);
  CHECK(d.a_to_c == 0);
}

TEST_CASE("program_cell toggle count equals write_cost") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uw(-1.0, 1.0);
  for (int bits = 2; bits <= 6; ++bits) {
    CellConfig cfg = CellConfig::from_base(bits, 0.5);
    CellState cell = CellState::fresh(cfg);
    double prev = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      double next = uw(rng);
      ProgramDelta d = program_cell(cell, weight_levels(cfg, next));
      CHECK(d.writes == write_cost(cfg, next, prev));
      CHECK(d.writes == d.c_to_a + d.a_to_c);
      CHECK(cell.level() == weight_levels(cfg, next));
      prev = next;
    }
  }
}

TEST_CASE("wear leveling rotates through the wires") {
  CellConfig cfg = CellConfig::from_base(2, 0.5);
  CellState cell = CellState::fresh(cfg);
  double w1 = 1.0 / 7.0;  // level (1, 0)

  // Toggling a single positive wire on and off must not hammer wire 0:
  // lowest-wear-first spreads the cycles over all three wires.
  for (int cycle = 0; cycle < 2; ++cycle) {
    program_cell(cell, weight_levels(cfg, w1));
    program_cell(cell, weight_levels(cfg, 0.0));
  }
  program_cell(cell, weight_levels(cfg, w1));
  CHECK(cell.pos.wear == std::vector<std::uint64_t>{2, 2, 1});

  program_cell(cell, weight_levels(cfg, 0.0));
  CHECK(cell.pos.wear == std::vector<std::uint64_t>{2, 2, 2});
  CHECK(cell.neg.wear == std::vector<std::uint64_t>{0, 0, 0});
}

TEST_CASE("triangle inequality for write counts") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uw(-1.0, 1.0);
  for (int bits : {2, 3, 5}) {
    CellConfig cfg = CellConfig::from_base(bits, 0.5);
    for (int trial = 0; trial < 2000; ++trial) {
      double a = uw(rng), b = uw(rng), c = uw(rng);
      CHECK(write_cost(cfg, c, a) <= write_cost(cfg, b, a) + write_cost(cfg, c, b));
    }
  }
}

TEST_CASE("energy model reproduces the pulse table") {
  EnergyModel model;
  CHECK(model.energy_a_to_c() == 500.0);   // 20 pulses x 5 V^2 x 1 us
  CHECK(model.energy_c_to_a() == 112.5);   // 1 pulse x 225 V^2 x 0.5 us
  CHECK(model.energy_a_to_c() / model.energy_c_to_a() == 40.0 / 9.0);

  WriteStats stats;
  CHECK(write_energy(stats, model) == 0.0);
  stats.writes_a_to_c = 1;
  CHECK(write_energy(stats, model) == 500.0);
  stats.writes_a_to_c = 2;
  stats.writes_c_to_a = 4;
  CHECK(write_energy(stats, model) == 1450.0);

  EnergyModel cooler = model;
  cooler.heater_resistance = 2.0;
  CHECK(write_energy(stats, cooler) == 725.0);
}

TEST_CASE("program_block keeps the PTC counters consistent") {
  CellConfig cfg = CellConfig::from_base(2, 0.5);
  PtcState ptc(cfg, 2);

  ProgramDelta d = ptc.program_block(Matrix(2, 2, 0.0));  // fresh already encodes 0
  CHECK(d.writes == 0);

  d = ptc.program_block(Matrix(2, 2, 1.0));
  CHECK(d.writes == 12);
  CHECK(d.c_to_a == 12);
  CHECK(d.a_to_c == 0);
  CHECK(ptc.total_writes() == 12);
  CHECK(ptc.max_cell_writes() == 3);

  d = ptc.program_block(Matrix(2, 2, 1.0));  // redundant rewrite is free
  CHECK(d.writes == 0);

  Matrix mixed(2, 2, 1.0);
  mixed(0, 0) = -1.0;  // 6 toggles at one cell, 0 elsewhere
  d = ptc.program_block(mixed);
  CHECK(d.writes == 6);
  CHECK(ptc.max_cell_writes() == 9);
  CHECK(ptc.total_writes() == 18);
  CHECK(ptc.a_to_c + ptc.c_to_a == ptc.total_writes());

  CHECK_THROWS_AS(ptc.program_block(Matrix(1, 2, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(ptc.program_block(Matrix(2, 2, 2.0)), std::domain_error);
}

TEST_CASE("layer write totals for frozen scalar sequences") {
  CellConfig cfg = CellConfig::from_base(2, 0.5);

  WriteStats one = layer_writes(cfg, scalar_sequence({1.0}));
  CHECK(one.total_writes == 3);
  CHECK(one.max_cell_writes == 3);

  WriteStats given = layer_writes(cfg, scalar_sequence({1.0, -1.0 / 7.0, 3.0 / 7.0}));
  CHECK(given.total_writes == 10);  // 3 + 4 + 3 stepwise
  CHECK(given.max_cell_writes == 10);
  CHECK(given.writes_c_to_a == 6);
  CHECK(given.writes_a_to_c == 4);
  CHECK(given.energy_units == 6 * 112.5 + 4 * 500.0);

  WriteStats sorted = layer_writes(cfg, scalar_sequence({-1.0 / 7.0, 3.0 / 7.0, 1.0}));
  CHECK(sorted.total_writes == 5);

  WriteStats empty = layer_writes(cfg, LayerSchedule{});
  CHECK(empty.total_writes == 0);
  CHECK(empty.max_cell_writes == 0);
  CHECK(empty.energy_units == 0.0);
}

TEST_CASE("layer stats aggregate over PTCs") {
  CellConfig cfg = CellConfig::from_base(2, 0.5);
  LayerSchedule s;
  s.k = 1;
  s.weight_rows = 2;
  s.weight_cols = 1;
  PtcSequence heavy;
  heavy.steps.push_back({Matrix(1, 1, 1.0), 0, 0});
  PtcSequence light;
  light.steps.push_back({Matrix(1, 1, 1.0 / 7.0), 1, 0});
  s.ptcs = {heavy, light};

  WriteStats stats = layer_writes(cfg, s);
  CHECK(stats.total_writes == 4);
  CHECK(stats.max_cell_writes == 3);  // max over the cluster, not a sum
  CHECK(stats.total_writes == stats.writes_c_to_a + stats.writes_a_to_c);
}

TEST_CASE("stuck wires cap what a program can reach") {
  CellConfig cfg = CellConfig::from_base(2, 0.5);
  PtcState ptc(cfg, 1);
  AgedProfile profile = AgedProfile::zeros(1);
  profile.f_pos[0] = 2;
  ptc.apply_stuck_profile(profile);

  ProgramDelta d = ptc.program_block(Matrix(1, 1, 1.0));  // wants (3,0), one wire usable
  CHECK(d.writes == 1);
  CHECK(ptc.cell(0, 0).level() == LevelPair{1, 0});
  CHECK(ptc.cell(0, 0).pos.amorphous[0] == 0);  // stuck wires never move
  CHECK(ptc.cell(0, 0).pos.wear[0] == 0);
  CHECK(ptc.cell(0, 0).pos.wear[1] == 0);

  // The negative array is untouched by the profile.
  d = ptc.program_block(Matrix(1, 1, -1.0));
  CHECK(ptc.cell(0, 0).level() == LevelPair{0, -3});
}
