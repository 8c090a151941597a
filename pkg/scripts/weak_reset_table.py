"""Print weak-reset steady states and their correlations at every resonance.

    python3 scripts/weak_reset_table.py [--model entangling]
"""

import argparse

import numpy as np

from qreset import CorrelationSet, GateModel, resonance_scan, weak_reset_limit
from qreset.models import generator_by_name


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--model", default="entangling")
    p.add_argument("--generic-theta", type=float, default=0.4)
    args = p.parse_args()

    h = generator_by_name(args.model)
    report = resonance_scan(h)
    thetas = [("generic", args.generic_theta)] + [(str(prov), th) for th, prov in report.resonances]
    np.set_printoptions(precision=4, suppress=True, linewidth=120)
    print(f"{'theta/pi':>9} {'C':>9} {'conc':>9} {'LQU':>9} {'M':>9}  provenance")
    for label, th in thetas:
        rho = weak_reset_limit(GateModel(h, th))
        cs = CorrelationSet.of(rho)
        print(f"{th / np.pi:9.4f} " + " ".join(f"{v:9.5f}" for v in cs.values()) + f"  {label}")
    if report.degenerate_pairs:
        print("degenerate pairs:", report.degenerate_pairs)


if __name__ == "__main__":
    main()
