"""Run every figure preset and write CSV tables plus SVG plots.

Usage::

    python3 scripts/reproduce_figures.py --out results            # full grids
    python3 scripts/reproduce_figures.py --out results --quick    # smoke run, about a minute
    python3 scripts/reproduce_figures.py fig3 fig5 --workers 4
"""

import argparse
import logging
import time

from ehrelay.harness import PRESETS, run_preset


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("presets", nargs="*", default=sorted(PRESETS, key=lambda n: int(n[3:])))
    parser.add_argument("--out", default="results")
    parser.add_argument("--quick", action="store_true")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--no-plot", action="store_true")
    args = parser.parse_args()
    logging.basicConfig(level=logging.WARNING)

    for name in args.presets:
        start = time.perf_counter()
        results = run_preset(name, args.out, quick=args.quick, workers=args.workers,
                             plot=not args.no_plot)
        rows = sum(len(r.rows) for r in results.values())
        failed = sum(r.failures for r in results.values())
        print(f"{name}: {len(results)} tables, {rows} rows, {failed} failed, "
              f"{time.perf_counter() - start:.1f} s  ({PRESETS[name].description.splitlines()[0]})")


if __name__ == "__main__":
    main()
