#include "elight/model_io.hpp"

#include <cmath>
#include <cctype>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "elight/report.hpp"

namespace elight {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json_file(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string(what) + " not found: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string(what) + " " + path.string() + ": " + e.what());
  }
}

std::size_t shape_count(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

}  // namespace

Manifest parse_manifest(const fs::path& path) {
  json doc = parse_json_file(path, "manifest");
  Manifest m;
  m.model = doc.value("model", "model");
  if (!doc.contains("layers") || !doc.at("layers").is_array() || doc.at("layers").empty())
    throw std::runtime_error("manifest " + path.string() + " has no layers");
  std::set<std::string> seen;
  for (const auto& entry : doc.at("layers")) {
    ManifestLayer layer;
    layer.name = entry.at("name").get<std::string>();
    if (!seen.insert(layer.name).second)
      throw std::runtime_error("manifest duplicates layer name: " + layer.name);
    layer.kind = entry.at("kind").get<std::string>();
    std::size_t want_dims;
    if (layer.kind == "dense")
      want_dims = 2;
    else if (layer.kind == "conv")
      want_dims = 4;
    else
      throw std::runtime_error("layer " + layer.name + ": unknown kind '" + layer.kind + "'");
    for (const auto& d : entry.at("shape")) {
      long long v = d.get<long long>();
      if (v < 1) throw std::runtime_error("layer " + layer.name + ": shape entries must be >= 1");
      layer.shape.push_back(static_cast<std::size_t>(v));
    }
    if (layer.shape.size() != want_dims)
      throw std::runtime_error("layer " + layer.name + ": " + layer.kind + " needs " +
                               std::to_string(want_dims) + " shape entries");
    layer.data_file = entry.at("data").get<std::string>();
    layer.dtype = entry.value("dtype", "f32le");
    if (layer.dtype != "f32le")
      throw std::runtime_error("layer " + layer.name + ": unsupported dtype '" + layer.dtype + "'");
    m.layers.push_back(std::move(layer));
  }
  return m;
}

std::vector<float> read_f32_blob(const fs::path& path, std::size_t expected,
                                 const std::string& layer_name) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("layer " + layer_name + ": blob not found: " + path.string());
  std::size_t bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != expected * sizeof(float))
    throw std::runtime_error("layer " + layer_name + ": blob holds " +
                             std::to_string(bytes / sizeof(float)) + " floats, manifest expects " +
                             std::to_string(expected));
  std::vector<float> values(expected);
  in.seekg(0);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw std::runtime_error("layer " + layer_name + ": short read on " + path.string());
  return values;
}

void write_f32_blob(const fs::path& path, const std::vector<float>& values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write blob: " + path.string());
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(float)));
  if (!out) throw std::runtime_error("short write on " + path.string());
}

NetworkModel load_model(const fs::path& manifest_path) {
  Manifest manifest = parse_manifest(manifest_path);
  fs::path base = manifest_path.parent_path();
  NetworkModel model;
  model.name = manifest.model;
  for (const ManifestLayer& entry : manifest.layers) {
    std::size_t count = shape_count(entry.shape);
    std::vector<float> raw = read_f32_blob(base / entry.data_file, count, entry.name);
    std::vector<double> values(raw.begin(), raw.end());
    for (double v : values)
      if (!std::isfinite(v))
        throw std::runtime_error("layer " + entry.name + ": non-finite weight in blob");

    NetworkLayer layer;
    layer.name = entry.name;
    layer.shape = entry.shape;
    if (entry.kind == "dense") {
      layer.kind = NetworkLayer::Kind::Dense;
      layer.weights = Matrix(entry.shape[0], entry.shape[1]);
      layer.weights.data = values;
    } else {
      layer.kind = NetworkLayer::Kind::Conv;
      layer.weights =
          conv_to_gemm({entry.shape[0], entry.shape[1], entry.shape[2], entry.shape[3]}, values);
    }
    // Per-layer rescale so the largest magnitude is exactly 1; plain linear
    // scaling keeps already-normalized checkpoints bit-stable.
    double peak = max_abs(layer.weights);
    if (peak > 0.0 && peak != 1.0)
      for (double& v : layer.weights.data) v /= peak;
    model.layers.push_back(std::move(layer));
  }
  return model;
}

void save_model(const NetworkModel& model, const fs::path& manifest_path) {
  fs::path base = manifest_path.parent_path();
  if (!base.empty()) fs::create_directories(base);
  json layers = json::array();
  for (const NetworkLayer& layer : model.layers) {
    std::string file;
    for (char c : layer.name) file += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    file += ".bin";
    std::vector<float> raw(layer.weights.data.begin(), layer.weights.data.end());
    write_f32_blob(base / file, raw);
    layers.push_back({
        {"name", layer.name},
        {"kind", layer.kind == NetworkLayer::Kind::Dense ? "dense" : "conv"},
        {"shape", layer.shape},
        {"data", file},
        {"dtype", "f32le"},
    });
  }
  json doc{{"model", model.name}, {"layers", layers}};
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write manifest: " + manifest_path.string());
  out << canonical_json(doc);
}

AgedProfile load_aging_profile(const fs::path& path) {
  json doc = parse_json_file(path, "aging profile");
  int k = doc.at("k").get<int>();
  if (k < 1) throw std::runtime_error("aging profile k must be >= 1");
  AgedProfile profile = AgedProfile::zeros(k);
  auto read_grid = [&](const char* key, std::vector<std::uint32_t>& out) {
    const json& grid = doc.at(key);
    if (!grid.is_array() || grid.size() != static_cast<std::size_t>(k))
      throw std::runtime_error(std::string("aging profile ") + key + " must be a k x k grid");
    for (int r = 0; r < k; ++r) {
      const json& row = grid.at(r);
      if (!row.is_array() || row.size() != static_cast<std::size_t>(k))
        throw std::runtime_error(std::string("aging profile ") + key + " must be a k x k grid");
      for (int c = 0; c < k; ++c) {
        long long v = row.at(c).get<long long>();
        if (v < 0) throw std::runtime_error("aging profile counts must be >= 0");
        out[static_cast<std::size_t>(r) * k + c] = static_cast<std::uint32_t>(v);
      }
    }
  };
  read_grid("f_pos", profile.f_pos);
  read_grid("f_neg", profile.f_neg);
  return profile;
}

}  // namespace elight
