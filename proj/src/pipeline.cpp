#include "elight/pipeline.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "elight/report.hpp"
#include "elight/reorder.hpp"
#include "elight/version.hpp"

namespace elight {

using nlohmann::json;

CellConfig RunConfig::cell() const {
  return delta_e_db ? CellConfig::from_extinction_step(bits, *delta_e_db)
                    : CellConfig::from_base(bits, base);
}

void RunConfig::validate() const {
  cell();  // bits/base checks live there
  if (ptc_size < 1) throw std::invalid_argument("ptc_size must be >= 1");
  if (ptc_count < 0) throw std::invalid_argument("ptc_count must be >= 0");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
}

RunConfig RunConfig::from_json(const json& doc) {
  static const std::set<std::string> known{
      "bits",      "base_c",    "delta_e_db", "ptc_size", "ptc_count",      "reorder",
      "remap",     "endurance", "lambda",     "seed",     "deviation_form", "audit",
      "energy"};
  if (!doc.is_object()) throw std::runtime_error("config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw std::runtime_error("unknown config key: " + key);

  RunConfig rc;
  rc.bits = doc.value("bits", rc.bits);
  rc.base = doc.value("base_c", rc.base);
  if (doc.contains("delta_e_db") && !doc.at("delta_e_db").is_null())
    rc.delta_e_db = doc.at("delta_e_db").get<double>();
  rc.ptc_size = doc.value("ptc_size", rc.ptc_size);
  rc.ptc_count = doc.value("ptc_count", rc.ptc_count);
  rc.reorder = doc.value("reorder", rc.reorder);
  rc.remap = doc.value("remap", rc.remap);
  rc.endurance = doc.value("endurance", rc.endurance);
  rc.lambda = doc.value("lambda", rc.lambda);
  rc.seed = doc.value("seed", rc.seed);
  rc.audit = doc.value("audit", rc.audit);
  if (doc.contains("deviation_form")) {
    std::string form = doc.at("deviation_form").get<std::string>();
    if (form == "corrected")
      rc.deviation_form = DeviationForm::Corrected;
    else if (form == "verbatim")
      rc.deviation_form = DeviationForm::Verbatim;
    else
      throw std::runtime_error("deviation_form must be 'corrected' or 'verbatim'");
  }
  if (doc.contains("energy")) {
    const json& e = doc.at("energy");
    auto read_pulse = [&](const char* key, PulseProfile& p) {
      if (!e.contains(key)) return;
      const json& src = e.at(key);
      p.period_us = src.value("period_us", p.period_us);
      p.voltage_v = src.value("voltage_v", p.voltage_v);
      p.pulses = src.value("pulses", p.pulses);
    };
    read_pulse("a_to_c", rc.energy.crystallize);
    read_pulse("c_to_a", rc.energy.amorphize);
    rc.energy.heater_resistance = e.value("heater_resistance", rc.energy.heater_resistance);
  }
  rc.validate();
  return rc;
}

json RunConfig::echo() const {
  json e{
      {"bits", bits},
      {"base_c", base},
      {"delta_e_db", delta_e_db ? json(*delta_e_db) : json(nullptr)},
      {"ptc_size", ptc_size},
      {"ptc_count", ptc_count},
      {"reorder", reorder},
      {"remap", remap},
      {"endurance", endurance},
      {"lambda", lambda},
      {"seed", seed},
      {"deviation_form", deviation_form == DeviationForm::Corrected ? "corrected" : "verbatim"},
      {"energy",
       {{"a_to_c",
         {{"period_us", energy.crystallize.period_us},
          {"voltage_v", energy.crystallize.voltage_v},
          {"pulses", energy.crystallize.pulses}}},
        {"c_to_a",
         {{"period_us", energy.amorphize.period_us},
          {"voltage_v", energy.amorphize.voltage_v},
          {"pulses", energy.amorphize.pulses}}},
        {"heater_resistance", energy.heater_resistance}}},
  };
  return e;
}

namespace {

json perms_to_json(const LayerSchedule& sched) {
  json ptcs = json::array();
  for (const PtcSequence& seq : sched.ptcs) {
    json cells = json::array();
    for (const auto& perm : seq.cell_perms) cells.push_back(perm);
    ptcs.push_back(std::move(cells));
  }
  return ptcs;
}

json profile_to_json(const AgedProfile& p) {
  json pos = json::array(), neg = json::array();
  for (int r = 0; r < p.k; ++r) {
    json pr = json::array(), nr = json::array();
    for (int c = 0; c < p.k; ++c) {
      pr.push_back(p.f_pos[static_cast<std::size_t>(r) * p.k + c]);
      nr.push_back(p.f_neg[static_cast<std::size_t>(r) * p.k + c]);
    }
    pos.push_back(std::move(pr));
    neg.push_back(std::move(nr));
  }
  return {{"k", p.k}, {"f_pos", std::move(pos)}, {"f_neg", std::move(neg)}};
}

}  // namespace

json run_pipeline(const RunConfig& config, const NetworkModel& model,
                  const PipelineInputs& inputs) {
  config.validate();
  CellConfig cfg = config.cell();
  bool do_reorder = config.reorder || config.remap;  // remapping needs sorted columns
  if (inputs.aging_profile && inputs.aging_profile->k != config.ptc_size)
    throw std::runtime_error("aging profile size does not match ptc_size");

  json layers = json::array();
  json audit;
  WriteStats totals;
  for (const NetworkLayer& layer : model.layers) {
    LayerSchedule sched = assign(partition(layer.weights, config.ptc_size), config.ptc_count);
    if (do_reorder) sched = column_reorder(sched);

    json layer_audit;
    if (config.audit && do_reorder) layer_audit["permutations"] = perms_to_json(sched);

    WriteStats stats;
    if (config.remap) {
      std::vector<AgedProfile> profiles;
      if (inputs.aging_profile) {
        profiles.assign(sched.ptcs.size(), *inputs.aging_profile);
      } else {
        // Age each PTC by dry-running its own schedule against the
        // endurance budget.
        for (const PtcSequence& seq : sched.ptcs) {
          PtcState state(cfg, config.ptc_size);
          for (const ScheduledBlock& step : seq.steps) state.program_block(step.values);
          profiles.push_back(inject_aging(state, config.endurance));
        }
      }
      LayerRemap remapped = remap_layer(sched, profiles, cfg, config.deviation_form);
      double matched_deviation = 0.0, realized = 0.0;
      for (std::size_t p = 0; p < remapped.schedule.ptcs.size(); ++p) {
        matched_deviation += remapped.orders[p].cost;
        realized += realized_deviation(remapped.schedule.ptcs[p], config.ptc_size, profiles[p], cfg);
      }
      LayerSchedule realized_sched = remapped.schedule;
      for (std::size_t p = 0; p < realized_sched.ptcs.size(); ++p)
        realized_sched.ptcs[p] =
            clamp_sequence(realized_sched.ptcs[p], config.ptc_size, profiles[p], cfg);
      stats = layer_writes(cfg, realized_sched, config.energy, &profiles);
      if (config.audit) {
        json orders = json::array();
        for (const RowOrder& o : remapped.orders)
          orders.push_back({{"assignment", o.assignment}, {"deviation", o.cost}});
        layer_audit["row_orders"] = std::move(orders);
        layer_audit["matched_deviation"] = matched_deviation;
        layer_audit["realized_deviation"] = realized;
        json profs = json::array();
        for (const AgedProfile& p : profiles) profs.push_back(profile_to_json(p));
        layer_audit["aging_profiles"] = std::move(profs);
      }
    } else {
      stats = layer_writes(cfg, sched, config.energy);
    }

    json row = stats_to_json(stats);
    row["name"] = layer.name;
    layers.push_back(std::move(row));
    if (config.audit) audit[layer.name] = std::move(layer_audit);

    totals.total_writes += stats.total_writes;
    totals.max_cell_writes += stats.max_cell_writes;
    totals.writes_a_to_c += stats.writes_a_to_c;
    totals.writes_c_to_a += stats.writes_c_to_a;
    totals.energy_units += stats.energy_units;
  }

  json report{
      {"tool", "elight"},       {"version", kVersion}, {"model", model.name},
      {"config", config.echo()}, {"layers", layers},    {"totals", stats_to_json(totals)},
  };
  if (config.audit) report["audit"] = std::move(audit);
  return report;
}

json train_toy_report(const RunConfig& config, const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw std::runtime_error("lambda sweep is empty");
  ToyConfig toy;
  toy.bits = config.bits;
  toy.base = config.delta_e_db ? config.cell().base : config.base;
  toy.k = config.ptc_size;
  toy.seed = config.seed;

  json rows = json::array();
  for (double lambda : lambdas) {
    toy.lambda = lambda;
    TrainRow row = train_toy(toy);
    rows.push_back({
        {"lambda", row.lambda},
        {"accuracy", row.accuracy},
        {"final_ce", row.final_ce},
        {"diverged", row.diverged},
        {"total_writes", row.total_writes},
        {"max_writes", row.max_writes},
        {"energy_units", row.energy_units},
        {"total_writes_reordered", row.total_writes_reordered},
        {"max_writes_reordered", row.max_writes_reordered},
        {"energy_units_reordered", row.energy_units_reordered},
    });
  }
  json config_echo{
      {"bits", toy.bits},           {"base_c", toy.base},
      {"ptc_size", toy.k},          {"seed", toy.seed},
      {"epochs", toy.epochs},       {"learning_rate", toy.learning_rate},
      {"momentum", toy.momentum},   {"batch_size", toy.batch_size},
      {"train_samples", toy.train_samples}, {"test_samples", toy.test_samples},
      {"dims", toy.dims},
  };
  return json{
      {"tool", "elight"},
      {"version", kVersion},
      {"config", std::move(config_echo)},
      {"rows", std::move(rows)},
  };
}

json quantize_model(const RunConfig& config, NetworkModel& model) {
  config.validate();
  CellConfig cfg = config.cell();
  for (NetworkLayer& layer : model.layers)
    for (double& v : layer.weights.data) v = quantize(cfg, v).value;
  json entries = json::array();
  for (const CodebookEntry& e : build_codebook(cfg))
    entries.push_back({{"weight", e.weight}, {"level_pos", e.level.pos}, {"level_neg", e.level.neg}});
  return json{
      {"bits", cfg.bits},
      {"base_c", cfg.base},
      {"floor_transmission", cfg.floor_trans},
      {"entries", std::move(entries)},
  };
}

}  // namespace elight
