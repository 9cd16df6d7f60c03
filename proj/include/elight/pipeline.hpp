#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "elight/aging.hpp"
#include "elight/deploy.hpp"
#include "elight/train.hpp"

namespace elight {

/// Everything one run needs; JSON config files and CLI flags both land here.
struct RunConfig {
  int bits = 4;
  double base = 0.5;
  std::optional<double> delta_e_db;  // overrides base when set
  int ptc_size = 16;
  int ptc_count = 0;  // 0: one PTC per block row
  bool reorder = false;
  bool remap = false;
  std::uint64_t endurance = 0;  // 0: aging disabled
  double lambda = 0.0;
  std::uint64_t seed = 1;
  DeviationForm deviation_form = DeviationForm::Corrected;
  bool audit = true;
  EnergyModel energy;

  CellConfig cell() const;
  void validate() const;
  static RunConfig from_json(const nlohmann::json& doc);
  nlohmann::json echo() const;
};

/// Optional externally supplied aging state, applied to every PTC.
struct PipelineInputs {
  std::optional<AgedProfile> aging_profile;
};

/// Full write/energy audit of deploying a checkpoint: partition, assign,
/// optional column reorder, optional aged-row remap, then write counting.
/// Returns the deterministic report document.
nlohmann::json run_pipeline(const RunConfig& config, const NetworkModel& model,
                            const PipelineInputs& inputs = {});

/// Toy training sweep over lambda values; returns the training report
/// document with per-lambda accuracy and write counts.
nlohmann::json train_toy_report(const RunConfig& config, const std::vector<double>& lambdas);

/// Quantize every layer of a model in place (values become codebook
/// entries) and return the codebook document for the active cell config.
nlohmann::json quantize_model(const RunConfig& config, NetworkModel& model);

}  // namespace elight
