#!/usr/bin/env python3
"""Generate a small sample checkpoint (manifest + f32le blobs) for the CLI.

Also emits an aged-cell profile sized for the chosen crossbar so the remap
subcommand can be tried immediately:

    python3 scripts/make_sample.py sample/
    elight simulate --model sample/manifest.json --ptc-size 8
    elight remap --model sample/manifest.json --ptc-size 8 \
        --aging sample/aging.json
"""

import argparse
import json
import pathlib

import numpy as np

LAYERS = [
    {"name": "fc1", "kind": "dense", "shape": [32, 64]},
    {"name": "conv1", "kind": "conv", "shape": [8, 3, 3, 3]},
    {"name": "head", "kind": "dense", "shape": [10, 32]},
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out_dir", type=pathlib.Path)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--ptc-size", type=int, default=8,
                        help="crossbar size the aging profile is written for")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    manifest = {"model": "sample", "layers": []}
    for layer in LAYERS:
        count = int(np.prod(layer["shape"]))
        values = rng.uniform(-1.0, 1.0, size=count).astype(np.float32)
        values[rng.integers(count)] = 1.0  # pin the peak: loads unrescaled
        blob = f"{layer['name']}.bin"
        (args.out_dir / blob).write_bytes(values.tobytes())
        manifest["layers"].append({**layer, "data": blob, "dtype": "f32le"})
    (args.out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    k = args.ptc_size
    wear = rng.integers(0, 3, size=(2, k, k))
    wear[:, rng.integers(k), rng.integers(k)] = 6  # one badly worn cell
    profile = {"k": k, "f_pos": wear[0].tolist(), "f_neg": wear[1].tolist()}
    (args.out_dir / "aging.json").write_text(json.dumps(profile, indent=2) + "\n")

    total = sum(int(np.prod(layer["shape"])) for layer in LAYERS)
    print(f"wrote {args.out_dir}/manifest.json ({len(LAYERS)} layers, "
          f"{total} weights) and aging.json (k={k})")


if __name__ == "__main__":
    main()
