#!/usr/bin/env python3
"""BER sweep of the proposed scheme and the three baselines over Rayleigh fading.

Writes one CSV (plus a .meta.json sidecar) per scheme and prints a side by
side table. Defaults match the acceptance run: 16-QAM, unit variances,
0 to 40 dB.

Usage: python scripts/ber_sweep.py [--trials N] [--symbols S] [--seed K] [--out DIR]
"""

import argparse
import json
from pathlib import Path

from zcnoma.sim import SCHEMES, FadingSpec, SimConfig, run_ber


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=4)
    ap.add_argument("--Mp", type=int, default=4)
    ap.add_argument("--vars", default="1,1,1", help="fading variances v11,v21,v22")
    ap.add_argument("--snr", default="0:2:40", help="start:step:stop in dB")
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--symbols", type=int, default=100)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/ber"))
    args = ap.parse_args()

    start, step, stop = (float(x) for x in args.snr.split(":"))
    snr = tuple(start + k * step for k in range(int(round((stop - start) / step)) + 1))
    fading = FadingSpec(variances=tuple(float(v) for v in args.vars.split(",")))
    args.out.mkdir(parents=True, exist_ok=True)

    curves = {}
    for scheme in SCHEMES:
        cfg = SimConfig(scheme, args.M, args.Mp, snr, args.trials, args.symbols, args.seed)
        curve = run_ber(cfg, fading, workers=args.workers)
        (args.out / f"{scheme}.csv").write_text(curve.to_csv())
        (args.out / f"{scheme}.csv.meta.json").write_text(
            json.dumps({"schema": 1, "kind": "ber-meta", "seed": args.seed, **curve.metadata()}, indent=2))
        curves[scheme] = curve
        print(f"{scheme} done")

    print("snr_db " + " ".join(f"{s:>10}" for s in SCHEMES))
    for k, s in enumerate(snr):
        print(f"{s:6g} " + " ".join(f"{curves[n].ber[k]:10.3e}" for n in SCHEMES))


if __name__ == "__main__":
    main()
