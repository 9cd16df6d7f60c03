#include "elight/cell.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace elight {

namespace {

// All powers of the base go through this one call so that recomputed values
// (floor_trans vs dequantize(0)) compare bit-identical.
double base_pow(double base, int e) { return std::pow(base, e); }

}  // namespace

CellConfig CellConfig::from_base(int bits, double base) {
  if (bits < 2 || bits > 8)
    throw std::invalid_argument("cell bits must be in [2, 8], got " + std::to_string(bits));
  if (!(base > 0.0) || !(base < 1.0))
    throw std::invalid_argument("cell base must lie strictly inside (0, 1)");
  CellConfig cfg;
  cfg.bits = bits;
  cfg.base = base;
  cfg.max_level = (1 << bits) - 1;
  cfg.floor_trans = base_pow(base, cfg.max_level);
  cfg.scale = 1.0 - cfg.floor_trans;
  cfg.log_base = std::log(base);
  return cfg;
}

CellConfig CellConfig::from_extinction_step(int bits, double delta_e_db) {
  if (delta_e_db == 0.0 || !std::isfinite(delta_e_db))
    throw std::invalid_argument("extinction step must be a nonzero finite dB value");
  return from_base(bits, std::pow(10.0, -std::abs(delta_e_db) / 10.0));
}

double transmission_level(const CellConfig& cfg, int crystalline) {
  if (crystalline < 0 || crystalline > cfg.max_level)
    throw std::invalid_argument("crystalline wire count out of range");
  return base_pow(cfg.base, crystalline);
}

double level_exponent(const CellConfig& cfg, double magnitude) {
  return std::log(cfg.scale * magnitude + cfg.floor_trans) / cfg.log_base;
}

LevelPair weight_levels(const CellConfig& cfg, double w) {
  if (!(std::abs(w) <= 1.0))
    throw std::domain_error("weight outside [-1, 1]: " + std::to_string(w));
  double e = std::round(level_exponent(cfg, std::abs(w)));
  if (e < 0.0) e = 0.0;
  if (e > cfg.max_level) e = cfg.max_level;
  int clipped = static_cast<int>(e);
  if (w < 0.0) return {0, clipped - cfg.max_level};
  return {cfg.max_level - clipped, 0};
}

double dequantize(const CellConfig& cfg, LevelPair lp) {
  if (lp.pos < 0 || lp.pos > cfg.max_level || lp.neg < -cfg.max_level || lp.neg > 0 ||
      (lp.pos != 0 && lp.neg != 0))
    throw std::invalid_argument("invalid level pair encoding");
  int mag = lp.pos != 0 ? lp.pos : -lp.neg;
  double value = (base_pow(cfg.base, cfg.max_level - mag) - cfg.floor_trans) / cfg.scale;
  return lp.neg != 0 ? -value : value;
}

Quantized quantize(const CellConfig& cfg, double w) {
  LevelPair lp = weight_levels(cfg, w);
  return {dequantize(cfg, lp), lp};
}

Codebook build_codebook(const CellConfig& cfg) {
  Codebook book;
  book.reserve(2 * cfg.max_level + 1);
  for (int l = -cfg.max_level; l <= cfg.max_level; ++l) {
    LevelPair lp = l < 0 ? LevelPair{0, l} : LevelPair{l, 0};
    book.push_back({dequantize(cfg, lp), lp});
  }
  return book;
}

}  // namespace elight
