"""Model operator pairs, factorizations, and finite-dimensional functional calculus.

Builds the finite truncations of the perturbed/unperturbed pair (H0, H) with
the factorization V = G^T J G, and provides dense spectral decompositions,
spectral projections E(-inf, lambda) and functions of operators phi(H).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

SYM_TOL = 1e-10
FACTOR_TOL = 1e-12

_KINDS = ("lattice1d", "jacobi", "random_traceclass")


class ModelError(ValueError):
    """Invalid model specification."""


def _canonical_potential(potential):
    items = []
    for site, value in potential:
        site = int(site)
        value = float(value)
        if value != 0.0:
            items.append((site, value))
    items.sort()
    sites = [s for s, _ in items]
    if len(set(sites)) != len(sites):
        raise ModelError("duplicate potential sites")
    return tuple(items)


@dataclass(frozen=True)
class ModelSpec:
    """Specification of a finite model pair.

    kind        -- 'lattice1d' (sites -N..N), 'jacobi' (sites 0..N) or
                   'random_traceclass' (dense trace-class V on the lattice).
    n_half      -- truncation half-width N.
    potential   -- tuple of (site, value); ignored for random_traceclass.
    decay_rate  -- eigenvalue decay exponent, random_traceclass only.
    seed        -- RNG seed for the random_traceclass orthogonal conjugation.
    """

    kind: str
    n_half: int
    potential: tuple = ()
    decay_rate: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ModelError(f"unsupported kind {self.kind!r}")
        if self.n_half < 1:
            raise ModelError("n_half must be >= 1")
        object.__setattr__(self, "potential", _canonical_potential(self.potential))
        if self.kind == "random_traceclass":
            if self.decay_rate is None or self.decay_rate <= 0:
                raise ModelError("random_traceclass requires decay_rate > 0")
        lo = 0 if self.kind == "jacobi" else -self.n_half
        for site, _ in self.potential:
            if not lo <= site <= self.n_half:
                raise ModelError(f"potential site {site} outside [{lo}, {self.n_half}]")

    @property
    def dim(self):
        return self.n_half + 1 if self.kind == "jacobi" else 2 * self.n_half + 1

    def site_index(self, site):
        return site if self.kind == "jacobi" else site + self.n_half

    def to_json(self):
        doc = {
            "kind": self.kind,
            "n_half": self.n_half,
            "potential": [[s, v] for s, v in self.potential],
            "decay_rate": self.decay_rate,
            "seed": self.seed,
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        return cls(
            kind=doc["kind"],
            n_half=int(doc["n_half"]),
            potential=tuple((int(s), float(v)) for s, v in doc["potential"]),
            decay_rate=doc.get("decay_rate"),
            seed=int(doc.get("seed", 0)),
        )


@dataclass(frozen=True)
class OperatorPair:
    """Finite symmetric pair H0, H = H0 + V with V = G^T J G."""

    h0: np.ndarray
    v: np.ndarray
    g: np.ndarray
    j: np.ndarray
    spec: ModelSpec

    @property
    def h(self):
        return self.h0 + self.v

    @property
    def k_dim(self):
        return self.g.shape[0]

    def check_factorization(self):
        return float(np.linalg.norm(self.g.T @ self.j @ self.g - self.v, 2))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Dense eigendecomposition with ascending eigenvalues."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual_bound: float


def _hopping_matrix(n):
    m = np.zeros((n, n))
    idx = np.arange(n - 1)
    m[idx, idx + 1] = 1.0
    m[idx + 1, idx] = 1.0
    return m


def _diag_factorization(v_diag):
    support = np.flatnonzero(v_diag)
    k = len(support)
    n = len(v_diag)
    g = np.zeros((k, n))
    g[np.arange(k), support] = np.sqrt(np.abs(v_diag[support]))
    j = np.diag(np.sign(v_diag[support])) if k else np.zeros((0, 0))
    return g, j


def build_model(spec: ModelSpec) -> OperatorPair:
    """Construct the operator pair for a model specification.

    lattice1d: (H0 u)(x) = u(x+1) + u(x-1) on sites -N..N with Dirichlet
    truncation; V diagonal. jacobi: same hopping on sites 0..N. For both,
    G selects the support rows weighted by |V|^{1/2} and J = sign(V) on the
    support. random_traceclass: V = Q diag(c) Q^T with c_i = (-1)^(i+1) i^(-p)
    and Q a seeded Haar orthogonal matrix; G = |V|^{1/2}, J = sign(V).
    """
    n = spec.dim
    h0 = _hopping_matrix(n)
    if spec.kind in ("lattice1d", "jacobi"):
        v_diag = np.zeros(n)
        for site, value in spec.potential:
            v_diag[spec.site_index(site)] = value
        v = np.diag(v_diag)
        g, j = _diag_factorization(v_diag)
        return OperatorPair(h0=h0, v=v, g=g, j=j, spec=spec)

    # random_traceclass: deterministic eigenvalue sequence, seeded conjugation
    rng = np.random.default_rng(spec.seed)
    a = rng.standard_normal((n, n))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    i = np.arange(1, n + 1)
    c = np.where(i % 2 == 1, 1.0, -1.0) * i ** (-spec.decay_rate)
    v = (q * c) @ q.T
    v = (v + v.T) / 2
    g = (q * np.sqrt(np.abs(c))) @ q.T
    g = (g + g.T) / 2
    j = (q * np.sign(c)) @ q.T
    j = (j + j.T) / 2
    return OperatorPair(h0=h0, v=v, g=g, j=j, spec=spec)


def is_tridiagonal(pair: OperatorPair) -> bool:
    return pair.spec.kind in ("lattice1d", "jacobi")


def eigendecompose(m: np.ndarray) -> SpectralDecomposition:
    """Full dense decomposition of a symmetric matrix, with residual report."""
    asym = np.linalg.norm(m - m.T, np.inf)
    if asym > SYM_TOL * max(1.0, np.linalg.norm(m, np.inf)):
        raise ModelError(f"matrix not symmetric (asymmetry {asym:.3e})")
    w, vecs = np.linalg.eigh((m + m.T) / 2)
    resid = np.linalg.norm(m @ vecs - vecs * w, 2)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=vecs, residual_bound=float(resid))


def tridiag_eigendecompose(pair: OperatorPair, which: str) -> SpectralDecomposition:
    """Fast eigendecomposition of H0 ('free') or H ('full') for tridiagonal models."""
    from scipy.linalg import eigh_tridiagonal

    m = pair.h0 if which == "free" else pair.h
    d = np.diag(m).copy()
    e = np.diag(m, 1).copy()
    w, vecs = eigh_tridiagonal(d, e)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=vecs, residual_bound=0.0)


def spectral_projection(dec: SpectralDecomposition, lam: float) -> np.ndarray:
    """Projection E(-inf, lam) = sum over eigenvalues strictly below lam."""
    sel = dec.eigenvalues < lam
    vecs = dec.eigenvectors[:, sel]
    return vecs @ vecs.T


def apply_function(dec: SpectralDecomposition, phi) -> np.ndarray:
    """Functional calculus phi(M) = sum phi(lambda_j) v_j v_j^T.

    phi is any callable accepting an ndarray of eigenvalues; PiecewiseFn
    evaluates with its jump-point convention.
    """
    vals = np.asarray(phi(dec.eigenvalues))
    vecs = dec.eigenvectors
    if np.iscomplexobj(vals):
        return (vecs * vals) @ vecs.T.astype(complex)
    return (vecs * vals) @ vecs.T


def matrix_to_csv(m: np.ndarray, path):
    """Row-major CSV export with 17 significant digits (complex as re+imj)."""
    m = np.atleast_2d(m)
    cplx = np.iscomplexobj(m)
    with open(path, "w") as fh:
        for row in m:
            if cplx:
                fh.write(",".join(f"{x.real:.17g}{x.imag:+.17g}j" for x in row))
            else:
                fh.write(",".join(f"{x:.17g}" for x in row))
            fh.write("\n")


def matrix_from_csv(path, dtype=float):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([dtype(tok.strip("()")) for tok in line.split(",")])
    return np.array(rows, dtype=dtype)
