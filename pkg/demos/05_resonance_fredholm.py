"""Resonance, the cap a <= 1, and the Fredholm dichotomy.

The two-site potential (0,v),(1,v) hits an exact resonance at v = 2 for
lambda = 0: the boundary operator I + A0 J becomes singular, the Fredholm
check flips to False, and the amplitude a reaches exactly 1.  Near the
resonance, sigma_min scales linearly in the detuning while 1 - a scales
quadratically.  Run:

    python3 demos/05_resonance_fredholm.py
"""

from specdiff import (ModelSpec, alpha_derivative, boundary_value, build_model,
                      fredholm_check)


def main():
    print(f"{'v':>6} {'alpha':>12} {'1 - alpha':>12} {'sigma_min':>12} "
          f"{'Fredholm':>9}")
    for v in (1.5, 1.9, 1.99, 2.0, 2.01, 2.1, 2.5):
        pair = build_model(ModelSpec("lattice1d", 50, ((0, v), (1, v))))
        bv = boundary_value(pair, 0.0)
        a = alpha_derivative(bv, pair.j).value
        chk = fredholm_check(bv, pair.j)
        print(f"{v:6.2f} {a:12.8f} {1.0 - a:12.2e} "
              f"{chk['sigma_min_0']:12.2e} {str(chk['fredholm']):>9}")
    print("\nalpha never exceeds 1; it equals 1 exactly at the resonance, "
          "where the Fredholm property fails.")


if __name__ == "__main__":
    main()
