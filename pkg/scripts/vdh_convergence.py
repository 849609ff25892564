"""Extend the van Dam-Hayden curve past the 2^16 checkpoint.

Prints log2(n), the optimal fidelity and ``(1 - F) * log2(n)``; the last
column settles near a constant, so reaching 0.99 needs n of order 2^55.
"""
import argparse
import math

from selfembezzle.embezzle import embezzlement_fidelity, vdh_catalyst
from selfembezzle.experiments import EPR


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-exponent", type=int, default=20)
    args = ap.parse_args()
    print(f"{'k':>3} {'fidelity':>14} {'(1-F)*k':>10}")
    for k in range(1, args.max_exponent + 1):
        f = embezzlement_fidelity(vdh_catalyst(2**k), EPR)
        print(f"{k:>3} {f:>14.10f} {(1 - f) * k:>10.5f}")
    f = embezzlement_fidelity(vdh_catalyst(2**args.max_exponent), EPR)
    c = (1 - f) * args.max_exponent
    print(f"extrapolated exponent for F > 0.99: about {math.ceil(c / 0.01)}")


if __name__ == "__main__":
    main()
