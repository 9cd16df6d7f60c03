"""Write/energy model for PCM photonic tensor core deployments.

Thin wrapper around the native _core module: distribution-aware
quantization, write counting with column reordering, aged-cell range math,
and the toy write-aware trainer.
"""

from elight._core import (
    CellConfig,
    __version__,
    block_write_cost,
    clamp_program,
    codebook,
    dequantize,
    hungarian,
    layer_write_stats,
    normalize_weights,
    quantize,
    quantize_array,
    supported_range,
    train_toy,
    transmission_level,
    write_cost,
)

__all__ = [
    "CellConfig",
    "__version__",
    "block_write_cost",
    "clamp_program",
    "codebook",
    "dequantize",
    "hungarian",
    "layer_write_stats",
    "normalize_weights",
    "quantize",
    "quantize_array",
    "supported_range",
    "train_toy",
    "transmission_level",
    "write_cost",
]
