// elight: write/energy auditor for PCM photonic tensor core deployments.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "elight/model_io.hpp"
#include "elight/pipeline.hpp"
#include "elight/report.hpp"
#include "elight/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string model_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> bits;
  std::optional<double> base_c;
  std::optional<int> ptc_size;
  std::optional<std::uint64_t> endurance;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_model) {
  cmd->add_option("--config", args.config_path, "JSON run configuration");
  auto* model = cmd->add_option("--model", args.model_path, "checkpoint manifest (JSON)");
  if (needs_model) model->required();
  cmd->add_option("--out", args.out_path, "output path (default: stdout)");
  cmd->add_option("--seed", args.seed, "RNG seed override");
  cmd->add_option("--bits", args.bits, "cell bit width override");
  cmd->add_option("--base-c", args.base_c, "per-wire transmission override");
  cmd->add_option("--ptc-size", args.ptc_size, "PTC crossbar size override");
  cmd->add_option("--endurance", args.endurance, "wire endurance override (0 disables aging)");
}

elight::RunConfig resolve_config(const CommonArgs& args) {
  elight::RunConfig rc;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("config not found: " + args.config_path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("config " + args.config_path + ": " + e.what());
    }
    rc = elight::RunConfig::from_json(doc);
  }
  if (args.seed) rc.seed = *args.seed;
  if (args.bits) rc.bits = *args.bits;
  if (args.base_c) {
    rc.base = *args.base_c;
    rc.delta_e_db.reset();
  }
  if (args.ptc_size) rc.ptc_size = *args.ptc_size;
  if (args.endurance) rc.endurance = *args.endurance;
  rc.validate();
  return rc;
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  fs::path path(out_path);
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  if (!out) throw std::runtime_error("short write on " + out_path);
}

std::vector<double> parse_sweep(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw std::runtime_error("empty lambda sweep");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"write/energy auditor for PCM photonic tensor core deployments"};
  app.set_version_flag("--version", std::string("elight ") + elight::kVersion);
  app.require_subcommand(1);

  CommonArgs quantize_args, simulate_args, reorder_args, remap_args, train_args, report_args;
  std::string aging_path, lambda_sweep = "0", report_in, report_format = "json";

  auto* cmd_quantize =
      app.add_subcommand("quantize", "emit a quantized checkpoint and its codebook");
  add_common(cmd_quantize, quantize_args, true);

  auto* cmd_simulate =
      app.add_subcommand("simulate", "count writes and energy for deploying a checkpoint");
  add_common(cmd_simulate, simulate_args, true);

  auto* cmd_reorder =
      app.add_subcommand("reorder", "simulate with column-based write reordering");
  add_common(cmd_reorder, reorder_args, true);

  auto* cmd_remap = app.add_subcommand("remap", "simulate with aged-row remapping");
  add_common(cmd_remap, remap_args, true);
  cmd_remap->add_option("--aging", aging_path, "aged-cell profile (JSON), else derived from --endurance");

  auto* cmd_train = app.add_subcommand("train-toy", "train the toy classifier with the write-aware loss");
  add_common(cmd_train, train_args, false);
  cmd_train->add_option("--lambda-sweep", lambda_sweep, "comma-separated penalty weights")
      ->capture_default_str();

  auto* cmd_report = app.add_subcommand("report", "re-render a report file");
  add_common(cmd_report, report_args, false);
  cmd_report->add_option("--in", report_in, "report JSON produced by simulate/reorder/remap")
      ->required();
  cmd_report->add_option("--format", report_format, "json or csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_quantize) {
      elight::RunConfig rc = resolve_config(quantize_args);
      if (quantize_args.out_path.empty())
        throw std::runtime_error("quantize needs --out <directory>");
      elight::NetworkModel model = elight::load_model(quantize_args.model_path);
      json codebook = elight::quantize_model(rc, model);
      fs::path out_dir(quantize_args.out_path);
      fs::create_directories(out_dir);
      elight::save_model(model, out_dir / "manifest.json");
      std::ofstream book(out_dir / "codebook.json", std::ios::trunc);
      book << elight::canonical_json(codebook);
      std::cout << "wrote " << (out_dir / "manifest.json").string() << " and codebook.json\n";
    } else if (*cmd_simulate || *cmd_reorder || *cmd_remap) {
      CommonArgs& args = *cmd_simulate ? simulate_args : (*cmd_reorder ? reorder_args : remap_args);
      elight::RunConfig rc = resolve_config(args);
      if (*cmd_reorder) rc.reorder = true;
      if (*cmd_remap) rc.remap = true;
      elight::NetworkModel model = elight::load_model(args.model_path);
      elight::PipelineInputs inputs;
      if (*cmd_remap && !aging_path.empty())
        inputs.aging_profile = elight::load_aging_profile(aging_path);
      json report = elight::run_pipeline(rc, model, inputs);
      write_text(args.out_path, elight::canonical_json(report));
    } else if (*cmd_train) {
      elight::RunConfig rc = resolve_config(train_args);
      if (!train_args.ptc_size && rc.ptc_size == 16) rc.ptc_size = 8;  // toy default
      json report = elight::train_toy_report(rc, parse_sweep(lambda_sweep));
      write_text(train_args.out_path, elight::canonical_json(report));
    } else if (*cmd_report) {
      std::ifstream in(report_in);
      if (!in) throw std::runtime_error("report not found: " + report_in);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw std::runtime_error("report " + report_in + ": " + e.what());
      }
      if (report_format == "json")
        write_text(report_args.out_path, elight::canonical_json(doc));
      else if (report_format == "csv")
        write_text(report_args.out_path, elight::report_to_csv(doc));
      else
        throw std::runtime_error("unknown report format: " + report_format);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
