"""Eigen-analysis of grounded Laplacians.

Covers the smallest/largest eigenvalue bookkeeping used for grid strength
(the smallest eigenvalue is the generalized short-circuit ratio), Schur
complements over node subsets, the modified Laplacian that adds a grid-forming
equivalent susceptance on the diagonal, and numerical checks of the two
eigenvalue inequalities that make a GFL/GFM split beneficial:

* ``lemma1_check``: ``lmin(B_mod / gfm) > lmin(B)``
* ``lemma2_check``: ``lmax(B / gfl) < lmax(B)``

``X / S`` is the Schur complement that eliminates the index set ``S``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .netgraph import GroundedLaplacian

MARGIN_TOL = 1e-10


class GridStrengthError(ValueError):
    pass


@dataclass(frozen=True)
class EigenDecomposition:
    lambdas: np.ndarray
    w: np.ndarray

    @property
    def smallest(self) -> float:
        return float(self.lambdas[0])

    @property
    def largest(self) -> float:
        return float(self.lambdas[-1])


@dataclass(frozen=True)
class Partition:
    """Split of node indices (0-based) into GFL and GFM sets."""

    gfl_idx: tuple[int, ...]
    gfm_idx: tuple[int, ...]

    def __post_init__(self):
        gfl = tuple(sorted(int(i) for i in self.gfl_idx))
        gfm = tuple(sorted(int(i) for i in self.gfm_idx))
        if set(gfl) & set(gfm):
            raise GridStrengthError(f"partition sets overlap: {set(gfl) & set(gfm)}")
        n = len(gfl) + len(gfm)
        if set(gfl) | set(gfm) != set(range(n)):
            raise GridStrengthError("partition must cover indices 0..n-1 exactly once")
        object.__setattr__(self, "gfl_idx", gfl)
        object.__setattr__(self, "gfm_idx", gfm)

    @property
    def n(self) -> int:
        return len(self.gfl_idx) + len(self.gfm_idx)

    @property
    def n1(self) -> int:
        return len(self.gfl_idx)

    @property
    def n2(self) -> int:
        return len(self.gfm_idx)

    @classmethod
    def from_kinds(cls, kinds) -> "Partition":
        kinds = [str(k).lower() for k in kinds]
        bad = set(kinds) - {"gfl", "gfm"}
        if bad:
            raise GridStrengthError(f"unknown inverter kinds {sorted(bad)}")
        return cls(
            tuple(i for i, k in enumerate(kinds) if k == "gfl"),
            tuple(i for i, k in enumerate(kinds) if k == "gfm"),
        )


@dataclass(frozen=True)
class LemmaResult:
    lhs: float
    rhs: float
    margin: float
    holds: bool
    status: str  # pass | fail | inconclusive | degenerate | decoupled
    chain: tuple[float, ...] = field(default=())


def _matrix(b) -> np.ndarray:
    if isinstance(b, GroundedLaplacian):
        return b.b
    return np.atleast_2d(np.asarray(b, dtype=float))


def eig_sym(b) -> EigenDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors of a symmetric matrix."""
    m = _matrix(b)
    if np.abs(m - m.T).max(initial=0.0) > 1e-12 * max(1.0, np.abs(m).max(initial=0.0)):
        raise GridStrengthError("eig_sym requires a symmetric matrix")
    lam, w = np.linalg.eigh(0.5 * (m + m.T))
    return EigenDecomposition(lam, w)


def gscr(b) -> float:
    """Generalized short-circuit ratio: smallest eigenvalue of ``b``."""
    return eig_sym(b).smallest


def schur_complement(b, eliminate) -> np.ndarray:
    m = _matrix(b)
    elim = sorted(set(int(i) for i in eliminate))
    keep = [i for i in range(m.shape[0]) if i not in set(elim)]
    if not elim:
        return m[np.ix_(keep, keep)].copy()
    m_ee = m[np.ix_(elim, elim)]
    if np.linalg.cond(m_ee) > 1e14:
        raise GridStrengthError(f"block on indices {elim} is singular")
    m_ke = m[np.ix_(keep, elim)]
    s = m[np.ix_(keep, keep)] - m_ke @ np.linalg.solve(m_ee, m[np.ix_(elim, keep)])
    return 0.5 * (s + s.T)


def modified_laplacian(b, p: Partition, b_eq: float) -> GroundedLaplacian:
    """``B + diag(0 on GFL nodes, b_eq on GFM nodes)``."""
    if not b_eq > 0:
        raise GridStrengthError(f"GFM equivalent susceptance must be positive, got {b_eq}")
    m = _matrix(b).copy()
    m[p.gfm_idx, p.gfm_idx] += b_eq
    order = b.node_order if isinstance(b, GroundedLaplacian) else None
    return GroundedLaplacian.from_matrix(m, order)


def is_irreducible(b, tol: float = 1e-12) -> bool:
    m = _matrix(b)
    if m.shape[0] == 1:
        return True
    adj = (np.abs(m) > tol).astype(float)
    np.fill_diagonal(adj, 0.0)
    return connected_components(adj, directed=False)[0] == 1


def _verdict(lhs, rhs, margin, reducible, chain=()) -> LemmaResult:
    if margin > MARGIN_TOL:
        return LemmaResult(lhs, rhs, margin, True, "pass", chain)
    if abs(margin) <= MARGIN_TOL:
        return LemmaResult(lhs, rhs, margin, False, "decoupled" if reducible else "inconclusive", chain)
    return LemmaResult(lhs, rhs, margin, False, "fail", chain)


def lemma1_check(b, p: Partition, b_eq: float) -> LemmaResult:
    """Smallest eigenvalue of the GFL-side subsystem versus the full network.

    Also reports the intermediate chain ``(lmin(B_mod/gfm), lmin(B_mod), lmin(B))``.
    """
    rhs = gscr(b)
    if p.n2 == 0 or p.n1 == 0:
        return LemmaResult(rhs, rhs, 0.0, False, "degenerate", (rhs, rhs, rhs))
    bmod = modified_laplacian(b, p, b_eq)
    lhs = float(np.linalg.eigvalsh(schur_complement(bmod, p.gfm_idx))[0])
    mid = gscr(bmod)
    return _verdict(lhs, rhs, lhs - rhs, not is_irreducible(b), (lhs, mid, rhs))


def lemma2_check(b, p: Partition) -> LemmaResult:
    """Largest eigenvalue of the GFM-side subsystem versus the full network."""
    rhs = eig_sym(b).largest
    if p.n1 == 0 or p.n2 == 0:
        return LemmaResult(rhs, rhs, 0.0, False, "degenerate")
    lhs = float(np.linalg.eigvalsh(schur_complement(b, p.gfl_idx))[-1])
    return _verdict(lhs, rhs, rhs - lhs, not is_irreducible(b))


def random_grounded_laplacian(rng: np.random.Generator, n: int, p_extra: float = 0.3) -> GroundedLaplacian:
    """Irreducible grounded Laplacian of a random connected graph.

    Edge weights are ``1/x`` with ``x ~ U[0.05, 1]``; a random nonempty node
    subset is tied to ground through branches drawn the same way.
    """
    m = np.zeros((n, n))
    perm = rng.permutation(n)
    edges = {tuple(sorted((perm[a], perm[rng.integers(0, a)]))) for a in range(1, n)}
    edges |= {(a, c) for a in range(n) for c in range(a + 1, n) if rng.random() < p_extra}
    for a, c in sorted(edges):
        y = 1.0 / rng.uniform(0.05, 1.0)
        m[a, a] += y
        m[c, c] += y
        m[a, c] -= y
        m[c, a] -= y
    grounded = rng.choice(n, size=rng.integers(1, n + 1), replace=False)
    for a in grounded:
        m[a, a] += 1.0 / rng.uniform(0.05, 1.0)
    return GroundedLaplacian.from_matrix(m)


def random_partition(rng: np.random.Generator, n: int) -> Partition:
    """Random split with both sides nonempty (``n >= 2``)."""
    n1 = int(rng.integers(1, n))
    perm = rng.permutation(n)
    return Partition(tuple(perm[:n1]), tuple(perm[n1:]))


def lemma_harness(trials: int, seed: int, n_max: int = 8, beq_max: float = 5.0) -> list[dict]:
    """Run both lemma checks on ``trials`` random instances.

    Returns JSON-ready records ``{seed, trial, n, partition, b_eq, lemma, lhs, rhs, margin, status}``.
    """
    if trials < 1:
        raise GridStrengthError("lemma harness needs at least one trial")
    rng = np.random.default_rng(seed)
    records = []
    for t in range(trials):
        n = int(rng.integers(2, n_max + 1))
        b = random_grounded_laplacian(rng, n)
        p = random_partition(rng, n)
        b_eq = float(rng.uniform(0.0, beq_max))
        while b_eq <= 0.0:
            b_eq = float(rng.uniform(0.0, beq_max))
        part = {"gfl": list(p.gfl_idx), "gfm": list(p.gfm_idx)}
        for name, res in (("lemma1", lemma1_check(b, p, b_eq)), ("lemma2", lemma2_check(b, p))):
            rec = {"seed": seed, "trial": t, "n": n, "partition": part, "b_eq": b_eq, "lemma": name}
            rec.update({k: v for k, v in asdict(res).items() if k != "chain"})
            records.append(rec)
    return records
