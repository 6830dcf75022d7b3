"""Regenerate the packaged default ensemble weights.

Grows the canonical reference panel (5 mechanisms x 100 parameter values x 3
replicates at 50 nodes, fixed seed), fits the PCA loading weights on all
panel-pair property distances, and writes them where the package loads them
from. Run from the repository root:

    python demos/fit_reference_weights.py [--out src/netclass/data/weights_default.json]

The panel takes a few minutes to grow and measure; the output is fully
deterministic, so rerunning reproduces the shipped file byte for byte.
"""

import argparse
import time
from pathlib import Path

from netclass.distance import (
    DEFAULT_WEIGHTS_SEED,
    PROPERTY_NAMES,
    fit_reference_weights,
    save_weights,
)

PANEL = dict(per_mechanism=100, replicates=3, n_nodes=50, seed=DEFAULT_WEIGHTS_SEED)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="src/netclass/data/weights_default.json")
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args()

    start = time.time()
    print(f"growing reference panel: {PANEL} ...")
    weights = fit_reference_weights(threads=args.threads, **PANEL)
    print(f"done in {time.time() - start:.0f}s")

    print("\nper-property weights (largest first):")
    ranked = sorted(zip(PROPERTY_NAMES, weights.weights), key=lambda kv: -kv[1])
    for name, value in ranked:
        print(f"  {name:28s} {value:.4f}")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_weights(weights, out, meta=PANEL)
    print(f"\nwrote {out}")


if __name__ == "__main__":
    main()
