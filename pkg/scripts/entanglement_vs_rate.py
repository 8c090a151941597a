"""Concurrence of the entangling model near theta = pi/4 as the reset rate shrinks.

On the resonance it fades out continuously; slightly detuned it drops to zero
at a finite rate.

    python3 scripts/entanglement_vs_rate.py --detuning 0.01
"""

import argparse

import numpy as np

from qreset import GateModel, concurrence, steady_state_solve
from qreset.models import entangling_generator


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--detuning", type=float, default=0.01)
    p.add_argument("--n-r", type=int, default=25)
    args = p.parse_args()

    h = entangling_generator()
    rates = np.geomspace(1e-4, 0.5, args.n_r)
    thetas = [np.pi / 4 - args.detuning, np.pi / 4, np.pi / 4 + args.detuning]
    print(f"{'r':>10} " + " ".join(f"{th / np.pi:>12.5f}pi" for th in thetas))
    for r in rates:
        vals = [concurrence(steady_state_solve(GateModel(h, th), r)) for th in thetas]
        print(f"{r:10.3e} " + " ".join(f"{v:14.3e}" for v in vals))


if __name__ == "__main__":
    main()
