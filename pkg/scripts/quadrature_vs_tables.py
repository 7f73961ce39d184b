"""Mode coefficients from contour quadrature against the closed-form tables.

Prints the largest deviation per table family and sector.
"""

import argparse

import numpy as np

from ellw.mode_algebra import (
    classical_higher_spin_f,
    contour_modes,
    critical_k0_table,
    h_limit_pole_exponents,
    h_limit_table,
    higher_spin_k0_table,
    higher_spin_pole_exponents,
    k0_radius,
    sector,
    sl2_sector_table,
)
from ellw.params import ModularParams
from ellw.structure_fn import ClassicalLimitLabel, f_function, f_h_function


def deviation(quad, table, scale=1.0):
    """Largest coefficient mismatch, relative once the table entries exceed 1."""
    size = max(1.0, max(abs(c) for c in table.coeffs.values()))
    return max(abs(scale * quad[r] - table.coeffs[r]) for r in quad) / size


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--r-max", type=int, default=6)
    ap.add_argument("--points", type=int, default=2048)
    args = ap.parse_args()
    q, R, pts = args.q, args.r_max, args.points

    rows = []
    for N in (2, 3, 4):
        mp = ModularParams(N, q, 0.3)
        quad = contour_modes(lambda x: f_function(x, mp), sector(N, 0).inner_radius(q), R, pts)
        rows.append((f"critical N={N}", deviation(quad, critical_k0_table(N, q, R))))
    mp2 = ModularParams(2, q, 0.3)
    for k in range(4):
        quad = contour_modes(lambda x: f_function(x, mp2), sector(2, k).inner_radius(q), R, pts)
        rows.append((f"sl2 sector k={k}", deviation(quad, sl2_sector_table(k, q, R))))
    for N, i, j in ((3, 1, 2), (4, 2, 3), (4, 1, 3)):
        mp = ModularParams(N, q, 0.3)
        rad = k0_radius(higher_spin_pole_exponents(i, j, N, 4 * N), q)
        quad = contour_modes(lambda x: classical_higher_spin_f(i, j, x, mp), rad, R, pts)
        rows.append((f"higher spin N={N} ({i},{j})", deviation(quad, higher_spin_k0_table(i, j, N, q, R))))
    for N, M, h in ((2, 1, 1), (3, 1, 1), (3, 2, 1), (2, 1, 2), (3, 2, 2)):
        scale = -2 * np.log(q) / ClassicalLimitLabel(h, M).normalization(N, q)
        rad = k0_radius(h_limit_pole_exponents(N, M, h, 4 * N), q)
        quad = contour_modes(lambda x: f_h_function(x, N, M, h, q), rad, R, pts)
        rows.append((f"h-limit N={N} M={M} h={h}", deviation(quad, h_limit_table(N, M, h, q, R), scale)))

    width = max(len(name) for name, _ in rows)
    for name, dev in rows:
        print(f"{name:<{width}}  scaled max |quadrature - table| = {dev:.2e}")


if __name__ == "__main__":
    main()
