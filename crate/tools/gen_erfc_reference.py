#!/usr/bin/env python3
"""Generate the erfc reference tables used by the cerf tests.

Values are computed with mpmath at 50 significant digits and written with
20 significant digits, well beyond double precision. Run from the
workspace root:

    python3 tools/gen_erfc_reference.py

Outputs (overwritten):
    crates/core/tests/data/erfc_grid.csv     41x41 lattice over [-10, 10]^2
    crates/core/tests/data/erfc_scatter.csv  seeded off-lattice points
"""

import csv
import os
import random

import mpmath as mp

mp.mp.dps = 50

OUT_DIR = os.path.join("crates", "core", "tests", "data")


def fmt(v):
    return mp.nstr(v, 20, min_fixed=1, max_fixed=0)


def row(z):
    z = mp.mpc(z)
    v = mp.erfc(z)
    return [fmt(z.real), fmt(z.imag), fmt(v.real), fmt(v.imag)]


def write(name, points):
    path = os.path.join(OUT_DIR, name)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re_z", "im_z", "re_erfc", "im_erfc"])
        for z in points:
            w.writerow(row(z))
    print(f"wrote {len(points)} rows to {path}")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)

    lattice = []
    for i in range(41):
        for j in range(41):
            lattice.append(mp.mpc(mp.mpf(-10) + mp.mpf(i) / 2, mp.mpf(-10) + mp.mpf(j) / 2))
    write("erfc_grid.csv", lattice)

    rng = random.Random(20240917)
    scatter = []
    # uniform in the square |re|,|im| <= 10
    for _ in range(1500):
        scatter.append(mp.mpc(rng.uniform(-10, 10), rng.uniform(-10, 10)))
    # concentrated near the origin and the diagonals, where region switches live
    for _ in range(1500):
        r = rng.uniform(0, 7)
        th = rng.uniform(-mp.pi, mp.pi)
        scatter.append(mp.mpc(r * mp.cos(th), r * mp.sin(th)))
    # near the real axis
    for _ in range(300):
        scatter.append(mp.mpc(rng.uniform(-10, 10), rng.uniform(-0.05, 0.05)))
    # the e^{i pi/4} ray that the propagator arguments live on
    for _ in range(300):
        r = rng.uniform(-12, 12)
        scatter.append(mp.mpc(r, r) / mp.sqrt(2) + mp.mpc(rng.uniform(-0.5, 0.5), 0))
    # a few fixed anchors
    scatter.append(mp.mpc(1, 1))
    scatter.append(3 * mp.exp(1j * mp.pi / 4))
    scatter.append(mp.mpc(0.7, 0.3))
    scatter.append(mp.mpc(0.5, 0.5))
    write("erfc_scatter.csv", scatter)


if __name__ == "__main__":
    main()
