#pragma once

#include <vector>

namespace elight {

/// Static description of one differential b-bit cell. A cell holds a pair of
/// wire arrays (positive/negative); each array is a stack of 2^b - 1 binary
/// wires where wire i in the crystalline state multiplies transmission by
/// `base` and in the amorphous state passes light unchanged. Cached products
/// of that geometry:
///   floor_trans = base^(2^b - 1), the all-crystalline transmission
///   scale       = 1 - floor_trans
/// Weight magnitudes live in [0, 1] and map to transmissions floor..1 before
/// rescaling, so 0 and +-1 are exact codebook entries.
struct CellConfig {
  int bits = 0;
  double base = 0.0;
  int max_level = 0;  // 2^b - 1, also the wire count per array
  double floor_trans = 0.0;
  double scale = 0.0;
  double log_base = 0.0;  // ln(base)

  static CellConfig from_base(int bits, double base);
  /// base = 10^(-|delta_e_db| / 10), one wire's extinction step in dB.
  static CellConfig from_extinction_step(int bits, double delta_e_db);

  int wire_count() const { return max_level; }
};

/// Amorphous wire counts of the positive and negative array, sign-folded:
/// pos in [0, max_level], neg in [-max_level, 0], at most one nonzero for any
/// quantized weight. The signed level pos + neg identifies the codebook entry.
struct LevelPair {
  int pos = 0;
  int neg = 0;

  int signed_level() const { return pos + neg; }
  bool operator==(const LevelPair&) const = default;
};

struct CodebookEntry {
  double weight;
  LevelPair level;
};

/// All 2^(b+1) - 1 representable weights, ascending.
using Codebook = std::vector<CodebookEntry>;

/// Transmission of one array with `crystalline` wires in the c state:
/// base^crystalline. crystalline must be in [0, max_level].
double transmission_level(const CellConfig& cfg, int crystalline);

/// Unrounded exponent log_base(scale * magnitude + floor_trans) for a weight
/// magnitude in [0, 1]. Exact weights land on integers 0..max_level.
double level_exponent(const CellConfig& cfg, double magnitude);

/// Nearest-level encoding of w in [-1, 1]. Rounding is half away from zero;
/// the exponent is clipped to [0, max_level] before use.
LevelPair weight_levels(const CellConfig& cfg, double w);

/// Weight represented by an encoding: sign(l) * (base^(max_level - |l|) -
/// floor_trans) / scale. Rejects pairs with both entries nonzero or out of
/// range.
double dequantize(const CellConfig& cfg, LevelPair lp);

struct Quantized {
  double value;
  LevelPair level;
};

/// weight_levels + dequantize in one step. Idempotent: quantizing a codebook
/// entry returns it bit-exactly.
Quantized quantize(const CellConfig& cfg, double w);

Codebook build_codebook(const CellConfig& cfg);

}  // namespace elight
