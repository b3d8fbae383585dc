#!/usr/bin/env python3
"""Run the vaguelet and Riesz verification suites for one filter pair.

Prints a one-line verdict per check.  Filters are given as JSON specs,
e.g. '{"kind": "ou"}' or '{"kind": "fractional", "d": 0.7}'.
"""

import argparse
import json
import sys

from vaguelab.family import FamilyBuilder, norm_band
from vaguelab.filters import FilterPair, filter_from_config
from vaguelab.mra import WaveletSpec
from vaguelab.riesz import (Truncation, biorthogonality_defect, bracket_sum,
                            gram, refinement_identity, riesz_bounds)
from vaguelab.vaguelet import VagueletParams, vaguelet_suite


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--h1", default='{"kind": "ou"}')
    parser.add_argument("--h2", default='{"kind": "ou"}')
    parser.add_argument("--wavelet", default="meyer",
                        choices=["meyer", "daubechies"])
    parser.add_argument("--levels", type=int, default=3)
    parser.add_argument("--shifts", type=int, default=8)
    args = parser.parse_args(argv)

    wavelet = (WaveletSpec("meyer") if args.wavelet == "meyer"
               else WaveletSpec("daubechies", n_moments=4))
    pair = FilterPair(filter_from_config(json.loads(args.h1)),
                      filter_from_config(json.loads(args.h2)))
    builder = FamilyBuilder(wavelet, pair)
    tr = Truncation(args.levels, args.shifts)

    checks = [norm_band(wavelet, pair), bracket_sum(wavelet, pair),
              biorthogonality_defect(builder, tr)]
    for side in ("primal", "dual"):
        checks.extend(vaguelet_suite(builder, side, VagueletParams()))
        g = gram(builder, side, tr)
        c1, c2 = riesz_bounds(g)
        print(f"riesz bounds ({side}): C1={c1:.4f} C2={c2:.4f}")
    for j in range(2):
        try:
            checks.append(refinement_identity(wavelet, pair, j))
        except Exception as exc:  # pole obstructions are informative, not fatal
            print(f"refinement identity j={j}: not formable ({exc})")

    failed = 0
    for check in checks:
        verdict = "PASS" if check.passed else "FAIL"
        failed += not check.passed
        print(f"{verdict} {check.name}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
