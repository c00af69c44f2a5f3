"""Regenerate data/uniform_10_100_seed42.txt (the seeded AM/GM/HM sample)."""
import sys

import numpy as np


def main(path="data/uniform_10_100_seed42.txt"):
    rng = np.random.default_rng(42)
    xs = rng.uniform(10, 100, 100)
    with open(path, "w") as fh:
        fh.write("# 100 draws from Uniform(10, 100), numpy default_rng(42)\n")
        for x in xs:
            fh.write(repr(float(x)) + "\n")


if __name__ == "__main__":
    main(*sys.argv[1:])
