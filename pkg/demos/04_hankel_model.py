"""The model Hankel operator behind the band [0, pi].

The integral kernel 2 sin(t-s)... compressed onto a logarithmic grid has
spectrum inside [0, pi]; its top eigenvalue creeps toward pi only as
log T grows.  The same discretization underlies the projection-product
identity whose residual halves when the grid is refined (at adequate T).
Run:

    python3 demos/04_hankel_model.py
"""

import numpy as np

from specdiff import (ModelSpec, build_l_operators, build_model, gamma_matrix,
                      hankel_bound_check)


def main():
    print(f"{'n':>5} {'T':>7} {'min eig':>10} {'max eig':>9}  (pi = {np.pi:.6f})")
    for n, t_cut in ((200, 50.0), (200, 500.0), (200, 5000.0)):
        w = np.linalg.eigvalsh(gamma_matrix(n, t_cut).matrix)
        print(f"{n:5d} {t_cut:7.0f} {w.min():10.2e} {w.max():9.6f}")

    chk = hankel_bound_check(lambda t: np.exp(-t), 1.0, 120, 50.0)
    print(f"\ncomparison bound for exp(-t) kernel holds: {chk['bound_ok']}")

    pair = build_model(ModelSpec("lattice1d", 60, ((0, 0.5),)))
    print(f"\n{'n':>5} {'T':>7} {'product-identity residual':>26}")
    for n in (200, 400):
        r = build_l_operators(pair, 0.0, n, 2000.0)["residual_b16"]
        print(f"{n:5d} {2000:7d} {r:26.3e}")
    print("\nat adequate T the residual drops faster than 2x per grid "
          "doubling; at small T it is tail-dominated and flat.")


if __name__ == "__main__":
    main()
