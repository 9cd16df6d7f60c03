#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "elight/aging.hpp"
#include "elight/deploy.hpp"

namespace elight {

/// Checkpoint manifest: a JSON index naming each layer's kind, shape, and
/// raw little-endian float32 blob (path relative to the manifest).
struct ManifestLayer {
  std::string name;
  std::string kind;  // "dense" or "conv"
  std::vector<std::size_t> shape;
  std::string data_file;
  std::string dtype = "f32le";
};

struct Manifest {
  std::string model;
  std::vector<ManifestLayer> layers;
};

Manifest parse_manifest(const std::filesystem::path& path);

std::vector<float> read_f32_blob(const std::filesystem::path& path, std::size_t expected,
                                 const std::string& layer_name);
void write_f32_blob(const std::filesystem::path& path, const std::vector<float>& values);

/// Load a checkpoint: parse the manifest, read and validate every blob
/// (count, finiteness), convert conv layers to their GEMM operand, and
/// normalize each layer into [-1, 1].
NetworkModel load_model(const std::filesystem::path& manifest_path);

/// Write a model back out as manifest + blobs. Layers are stored in their
/// declared shape; conv GEMM operands fold back to O,I,Kh,Kw order.
void save_model(const NetworkModel& model, const std::filesystem::path& manifest_path);

/// {"k": .., "f_pos": [[..]], "f_neg": [[..]]} row-major grids.
AgedProfile load_aging_profile(const std::filesystem::path& path);

}  // namespace elight
