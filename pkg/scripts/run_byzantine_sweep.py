#!/usr/bin/env python3
"""Relative error vs Byzantine count, with and without the decoder.

Writes one trial CSV and one aggregate CSV; the aggregate rows give the
mean relative error (dB) per (decoder, A) grid point.
"""

import argparse
import dataclasses
import math
from pathlib import Path

from alcc_lab.harness import write_sweep_csv
from alcc_lab.scenario import load_config

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "byzantine_sweep.cfg"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(DEFAULT_CONFIG))
    parser.add_argument("--out", default="byzantine_sweep.csv")
    parser.add_argument("--trials", type=int, default=None)
    args = parser.parse_args()

    scenario, spec = load_config(args.config)
    if args.trials is not None:
        spec = dataclasses.replace(spec, trials=args.trials)
    agg = write_sweep_csv(scenario, spec, args.out, args.out + ".agg.csv")
    for record in agg:
        label = record.label
        print(
            f"decoder={int(bool(label['decoder']))} A={label['A']}: "
            f"mean e_rel {20 * math.log10(record.mean_e_rel):8.2f} dB"
        )


if __name__ == "__main__":
    main()
