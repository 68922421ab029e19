"""Three routes to alpha(lambda) and truncation-ladder essential spectra of D.

alpha(lambda) = lim (pi/2eps) ||(G E0(lambda-eps,lambda+eps))^T J G E(...)||
is computed (i) from the derivative formula pi ||F0'^(1/2) J F'^(1/2)||,
(ii) from the unitary S-tilde matrix, (iii) from the projection-window limit
on finite truncations.  d_spectrum_ladder tracks the eigenvalue cloud of
D = E(-inf,lambda) - E0(-inf,lambda) along a ladder of truncations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .opcore import ModelSpec, OperatorPair, build_model, eigendecompose, is_tridiagonal
from .resolvent import BoundaryValue

ALPHA_CAP_TOL = 1e-6
KERNEL_TOL = 1e-6
UNITARITY_TOL = 1e-6
EPSN_MIN = 50.0
TRANSIENT_MOVE = 0.1
PM_ONE_TOL = 1e-6


class AlphaError(ValueError):
    """Invalid alpha computation request."""


@dataclass(frozen=True)
class AlphaEstimate:
    lam: float
    value: float
    route: str
    diagnostics: tuple = ()

    def __post_init__(self):
        if self.value < -1e-10:
            raise AlphaError(f"negative alpha {self.value}")
        if self.value > 1.0 + ALPHA_CAP_TOL:
            raise AlphaError(f"alpha {self.value} exceeds the unit cap")


@dataclass(frozen=True)
class EssSpectrumEstimate:
    lam: float
    n_list: tuple
    eigenvalue_clouds: tuple          # per-N arrays of eigenvalues of D
    filtered_cloud: np.ndarray        # largest-N cloud after transient filtering
    alpha_empirical: float
    fill_distance: float
    plus_one_count: int
    minus_one_count: int
    b4_residuals: tuple               # per-N D^2 identity residuals

    def to_json(self):
        import json
        return json.dumps({
            "lambda": self.lam,
            "n_list": list(self.n_list),
            "eigenvalue_clouds": [list(map(float, c)) for c in self.eigenvalue_clouds],
            "filtered_cloud": list(map(float, self.filtered_cloud)),
            "alpha_empirical": self.alpha_empirical,
            "fill_distance": self.fill_distance,
            "plus_one_count": self.plus_one_count,
            "minus_one_count": self.minus_one_count,
            "b4_residuals": list(map(float, self.b4_residuals)),
        })


def psd_sqrt(m: np.ndarray, floor=-1e-10) -> np.ndarray:
    """Symmetric square root with tiny negative eigenvalues clamped at zero."""
    if m.size == 0:
        return m.copy()
    w, v = np.linalg.eigh((m + m.T) / 2)
    if w.min() < floor:
        raise AlphaError(f"matrix not PSD (min eigenvalue {w.min():.3e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def alpha_derivative(bv: BoundaryValue, j: np.ndarray) -> AlphaEstimate:
    """alpha(lambda) = pi ||F0'(lambda)^(1/2) J F'(lambda)^(1/2)||."""
    if bv.f0p.size == 0:
        return AlphaEstimate(lam=bv.lam, value=0.0, route="derivative")
    m = psd_sqrt(bv.f0p) @ j @ psd_sqrt(bv.fp)
    value = np.pi * float(np.linalg.norm(m, 2))
    return AlphaEstimate(lam=bv.lam, value=value, route="derivative",
                         diagnostics=(("err_estimate", bv.err_estimate),))


def stilde_matrix(bv: BoundaryValue, j: np.ndarray) -> np.ndarray:
    """Unitary S-tilde(lambda) = I - 2i B0^(1/2) (J - J T J) B0^(1/2)."""
    k = bv.b0.shape[0]
    if k == 0:
        return np.zeros((0, 0), dtype=complex)
    root = psd_sqrt(bv.b0)
    return np.eye(k) - 2j * root @ (j - j @ bv.t @ j) @ root


def alpha_smatrix(bv: BoundaryValue, j: np.ndarray) -> AlphaEstimate:
    """alpha(lambda) = ||S-tilde(lambda) - I|| / 2, with unitarity asserted."""
    st = stilde_matrix(bv, j)
    k = st.shape[0]
    if k == 0:
        return AlphaEstimate(lam=bv.lam, value=0.0, route="smatrix_tilde")
    defect = float(np.linalg.norm(st.conj().T @ st - np.eye(k), 2))
    if defect > UNITARITY_TOL:
        raise AlphaError(f"S-tilde unitarity defect {defect:.3e}: "
                         "boundary values inconsistent")
    value = 0.5 * float(np.linalg.norm(st - np.eye(k), 2))
    return AlphaEstimate(lam=bv.lam, value=value, route="smatrix_tilde",
                         diagnostics=(("unitarity_defect", defect),))


def _window_block(pair: OperatorPair, which: str, lo: float, hi: float) -> np.ndarray:
    """G times the eigenvector block of H0/H with eigenvalues in (lo, hi)."""
    m = pair.h0 if which == "free" else pair.h
    if is_tridiagonal(pair):
        d = np.diag(m).copy()
        e = np.diag(m, 1).copy()
        w, vecs = eigh_tridiagonal(d, e, select="v", select_range=(lo, hi))
    else:
        w, vecs = np.linalg.eigh(m)
    sel = (w > lo) & (w < hi)
    return pair.g @ vecs[:, sel]


def alpha_proj_limit(pair: OperatorPair, lam, eps_schedule,
                     band_margin=0.1) -> AlphaEstimate:
    """Window-projection route on a finite truncation.

    For each eps computes (pi/2eps) ||(G E0(win))^T J G E(win)|| and
    extrapolates linearly in eps from the two smallest scheduled values.
    """
    eps_schedule = sorted(set(float(e) for e in eps_schedule), reverse=True)
    if not eps_schedule:
        raise AlphaError("empty eps schedule")
    n = pair.spec.n_half
    for e in eps_schedule:
        if e * n < EPSN_MIN:
            raise AlphaError(f"eps*N = {e * n:.1f} < {EPSN_MIN}: window too narrow "
                             "for the truncation")
    if pair.spec.kind == "lattice1d" and abs(lam) > 2.0 - band_margin:
        raise AlphaError(f"lambda={lam} within band_margin of the band edge")
    diag = []
    for e in eps_schedule:
        if pair.k_dim == 0:
            diag.append((e, 0.0))
            continue
        b0 = _window_block(pair, "free", lam - e, lam + e)
        b1 = _window_block(pair, "full", lam - e, lam + e)
        val = (np.pi / (2.0 * e)) * float(np.linalg.norm(b0.T @ pair.j @ b1, 2))
        diag.append((e, val))
    if len(diag) >= 2:
        (e1, v1), (e2, v2) = diag[-2], diag[-1]
        value = v2 + (v1 - v2) * (0.0 - e2) / (e1 - e2)
    else:
        value = diag[-1][1]
    return AlphaEstimate(lam=float(lam), value=float(max(value, 0.0)),
                         route="proj_limit", diagnostics=tuple(diag))


def _proj_blocks(spec: ModelSpec, lam):
    """Eigenvector blocks of H0 and H below lambda (strict) at one truncation."""
    pair = build_model(spec)
    if is_tridiagonal(pair):
        d0, e0 = np.diag(pair.h0).copy(), np.diag(pair.h0, 1).copy()
        w0, v0 = eigh_tridiagonal(d0, e0)
        d1, e1 = np.diag(pair.h).copy(), np.diag(pair.h, 1).copy()
        w1, v1 = eigh_tridiagonal(d1, e1)
    else:
        dec0 = eigendecompose(pair.h0)
        dec1 = eigendecompose(pair.h)
        w0, v0 = dec0.eigenvalues, dec0.eigenvectors
        w1, v1 = dec1.eigenvalues, dec1.eigenvectors
    return v0[:, w0 < lam].copy(), v1[:, w1 < lam].copy()


def _b4_residual_norm(v0n, v1n, iters=60, seed=1234):
    """Power-iteration norm of D^2 - E0- E+ E0- - E0+ E- E0+ (complementary splits).

    With E0+ = I - E0- and E+ = I - E- the identity is algebraically exact,
    so this measures pure roundoff.  All factors act as matvecs through the
    low-rank eigenvector blocks.
    """
    n = v0n.shape[0]

    def p0(x):
        return v0n @ (v0n.T @ x)

    def p1(x):
        return v1n @ (v1n.T @ x)

    def resid(x):
        d = lambda y: p1(y) - p0(y)
        t1 = d(d(x))
        t2 = p0(x) - p0(p1(p0(x)))          # E0- E+ E0- x with E+ = I - E-
        xm = x - p0(x)
        t3 = p1(xm) - p0(p1(xm))            # E0+ E- E0+ x
        return t1 - t2 - t3

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iters):
        y = resid(x)
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0
        est = nrm
        x = y / nrm
    return float(est)


def transient_filter(cloud, prev_cloud, move_tol=TRANSIENT_MOVE):
    """Drop eigenvalues that moved by more than move_tol since the previous rung."""
    cloud = np.sort(np.asarray(cloud))
    prev = np.sort(np.asarray(prev_cloud))
    if prev.size == 0:
        return cloud[np.abs(cloud) <= move_tol]
    pos = np.searchsorted(prev, cloud)
    lo = np.clip(pos - 1, 0, prev.size - 1)
    hi = np.clip(pos, 0, prev.size - 1)
    dist = np.minimum(np.abs(cloud - prev[lo]), np.abs(cloud - prev[hi]))
    return cloud[dist <= move_tol]


def d_spectrum_ladder(spec: ModelSpec, lam, n_list) -> EssSpectrumEstimate:
    """Eigenvalue clouds of D = E(-inf,lam) - E0(-inf,lam) along a truncation ladder."""
    n_list = tuple(int(n) for n in n_list)
    if len(n_list) < 3 or list(n_list) != sorted(n_list):
        raise AlphaError("n_list must be ascending with at least 3 entries")
    clouds = []
    residuals = []
    for n in n_list:
        spec_n = ModelSpec(kind=spec.kind, n_half=n, potential=spec.potential,
                           decay_rate=spec.decay_rate, seed=spec.seed)
        v0n, v1n = _proj_blocks(spec_n, lam)
        residuals.append(_b4_residual_norm(v0n, v1n))
        d = v1n @ v1n.T
        d -= v0n @ v0n.T
        del v0n, v1n
        w = np.linalg.eigvalsh(d)
        del d
        clouds.append(w)
    filtered = transient_filter(clouds[-1], clouds[-2])
    alpha_emp = float(np.max(np.abs(filtered))) if filtered.size else 0.0
    inner = np.sort(filtered[np.abs(filtered) <= alpha_emp + 1e-12])
    if inner.size >= 2:
        fill = float(np.max(np.diff(inner)))
    else:
        fill = 0.0
    plus = int(np.sum(np.abs(clouds[-1] - 1.0) <= PM_ONE_TOL))
    minus = int(np.sum(np.abs(clouds[-1] + 1.0) <= PM_ONE_TOL))
    return EssSpectrumEstimate(lam=float(lam), n_list=n_list,
                               eigenvalue_clouds=tuple(clouds),
                               filtered_cloud=filtered,
                               alpha_empirical=alpha_emp,
                               fill_distance=fill,
                               plus_one_count=plus,
                               minus_one_count=minus,
                               b4_residuals=tuple(residuals))


def fredholm_check(bv: BoundaryValue, j: np.ndarray, kernel_tol=KERNEL_TOL) -> dict:
    """Theorem-level equivalence check for the Fredholm property of the pair.

    sigma_min_0 = smallest singular value of I + A0(lambda) J,
    sigma_min_1 = smallest singular value of I - A(lambda) J; both must land
    on the same side of kernel_tol.
    """
    k = bv.a0.shape[0]
    if k == 0:
        return {"sigma_min_0": 1.0, "sigma_min_1": 1.0, "fredholm": True}
    s0 = float(np.linalg.svd(np.eye(k) + bv.a0 @ j, compute_uv=False).min())
    s1 = float(np.linalg.svd(np.eye(k) - bv.a @ j, compute_uv=False).min())
    side0 = s0 > kernel_tol
    side1 = s1 > kernel_tol
    if side0 != side1:
        raise AlphaError(
            f"Fredholm equivalence violated: sigma_min_0={s0:.3e}, "
            f"sigma_min_1={s1:.3e} straddle kernel_tol={kernel_tol:.1e}")
    return {"sigma_min_0": s0, "sigma_min_1": s1, "fredholm": side0}
