"""Three independent routes to the jump amplitude a(lambda).

For a single-site potential v on the 1D hopping lattice, the half-norm
a(lambda) controlling the essential spectrum of the projection difference
can be computed three ways:

  1. derivative route   — pi * || F0'^(1/2) J F'^(1/2) ||
  2. scattering route   — (1/2) || S~ - I || from the stationary S~ matrix
  3. projection window  — extrapolated norm of windowed projection products

At lambda = 0 the exact value is (v/2)/sqrt(1 + v^2/4).  Run:

    python3 demos/01_alpha_three_routes.py
"""

import numpy as np

from specdiff import (ModelSpec, alpha_derivative, alpha_proj_limit,
                      alpha_smatrix, boundary_value, build_model)


def main():
    print(f"{'v':>5} {'exact':>10} {'derivative':>12} {'smatrix':>12} "
          f"{'proj-window':>12}")
    for v in (0.25, 0.5, 1.0, 2.0):
        pair = build_model(ModelSpec("lattice1d", 50, ((0, v),)))
        bv = boundary_value(pair, 0.0)
        a1 = alpha_derivative(bv, pair.j).value
        a2 = alpha_smatrix(bv, pair.j).value
        big = build_model(ModelSpec("lattice1d", 2000, ((0, v),)))
        a3 = alpha_proj_limit(big, 0.0, (0.8, 0.4, 0.2, 0.1)).value
        exact = (v / 2.0) / np.hypot(1.0, v / 2.0)
        print(f"{v:5.2f} {exact:10.6f} {a1:12.6f} {a2:12.6f} {a3:12.6f}")
    print("\nroutes 1 and 2 agree to ~1e-12; route 3 carries the window "
          "extrapolation error (~1e-3 at this size).")


if __name__ == "__main__":
    main()
