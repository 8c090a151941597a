"""Compare sampled reset trajectories with the exact branch probabilities.

    python3 scripts/trajectory_check.py --schedule powerlaw:gamma=0.2,alpha=2 --horizon 50
"""

import argparse

import numpy as np

from qreset.montecarlo import compare_with_exact
from qreset.schedules import parse_schedule


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--schedule", default="poisson:r=0.5")
    p.add_argument("--horizon", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    s = parse_schedule(args.schedule)
    for samples in (10**3, 10**4, 10**5, 10**6):
        tv = compare_with_exact(s, args.horizon, samples, args.seed).tv_distance
        print(f"samples={samples:>8d} tv={tv:.3e} tv*sqrt(N)={tv * np.sqrt(samples):.3f}")


if __name__ == "__main__":
    main()
