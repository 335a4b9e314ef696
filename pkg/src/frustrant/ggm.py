"""Schmidt coefficients across bipartitions and the generalized geometric measure.

For a cut A:B the amplitudes of a state are arranged as a matrix
``M[a_bits, b_bits]``; the largest squared Schmidt coefficient is the top
eigenvalue of the Gram matrix on the smaller side.  The GGM is one minus the
largest such value over every cut.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, ResourceCapError
from .state import NORM_TOL, PureState

DENSE_EIG_MAX_DIM = 64
POWER_TOL = 1e-12
POWER_MAX_ITER = 5000
ZERO_GGM_TOL = 1e-9
DEFAULT_MAX_SITES = 20
# amplitude matrices with more entries than this are stored sparse
_DENSE_MATRIX_MAX = 1 << 14
_DENSE_THIN_MAX = 1 << 23


@dataclass(frozen=True, order=True)
class Bipartition:
    """A cut A:B of ``n`` sites, stored canonically with site 0 in ``part_a``."""

    n: int
    part_a: tuple[int, ...]

    def __init__(self, part_a: Iterable[int], n: int):
        n = int(n)
        sites = sorted({int(s) for s in part_a})
        if n < 2:
            raise DomainError("a bipartition needs at least 2 sites")
        if not sites or len(sites) >= n or sites[0] < 0 or sites[-1] >= n:
            raise DomainError(f"invalid cut side {sites} for {n} sites")
        if sites[0] != 0:
            sites = sorted(set(range(n)) - set(sites))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "part_a", tuple(sites))

    @property
    def part_b(self) -> tuple[int, ...]:
        a = set(self.part_a)
        return tuple(s for s in range(self.n) if s not in a)

    @property
    def size(self) -> int:
        """Number of sites on the smaller side."""
        return min(len(self.part_a), self.n - len(self.part_a))

    def __repr__(self) -> str:
        return f"Bipartition({list(self.part_a)}, n={self.n})"


@dataclass(frozen=True)
class GgmResult:
    ggm: float
    lambda_sq_max: float
    dominant: Bipartition
    per_partition: dict[Bipartition, float] | None = field(default=None, compare=False)
    restricted: bool = False
    upper_bound: bool = False


def enumerate_bipartitions(n: int) -> list[Bipartition]:
    """All ``2**(n-1) - 1`` cuts, by increasing ``|A|`` then lexicographically."""
    if n < 2:
        raise DomainError("need at least 2 sites to form a bipartition")
    cuts = []
    for k in range(1, n):
        for rest in itertools.combinations(range(1, n), k - 1):
            cuts.append(Bipartition((0,) + rest, n))
    return cuts


def _power_top_eigenvalue(
    matvec, dim: int, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER, real: bool = False
):
    """Top eigenvalue of a Hermitian PSD operator, or ``None`` without convergence.

    The start vector is a fixed pseudo-random draw: structured starts such as
    the all-ones vector can be orthogonal to the top eigenspace of
    spin-symmetric states.
    """
    v = np.random.default_rng(0x5EED).standard_normal(dim)
    if not real:
        v = v.astype(np.complex128)
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = matvec(v)
        mu = float(np.real(np.vdot(v, w)))
        resid = np.linalg.norm(w - mu * v)
        if resid <= tol * max(mu, 1.0):
            return mu
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
    return None


def largest_eigenvalue_psd(gram: np.ndarray) -> float:
    """Largest eigenvalue of a Hermitian PSD matrix."""
    dim = gram.shape[0]
    if dim <= DENSE_EIG_MAX_DIM:
        return float(np.linalg.eigvalsh(gram)[-1])
    mu = _power_top_eigenvalue(gram.dot, dim, real=not np.iscomplexobj(gram))
    if mu is None:
        return float(np.linalg.eigvalsh(gram)[-1])
    return mu


class _CutEvaluator:
    """Per-state cache for evaluating many cuts of the same state."""

    def __init__(self, s: PureState):
        if len(s) == 0:
            raise DomainError("zero state has no Schmidt decomposition")
        self.n = s.num_sites
        self.size = len(s)
        # float bits so key extraction runs through BLAS; keys stay exact below 2**53
        self.bits = ((s.indices[:, None] >> np.arange(self.n)) & 1).astype(np.float64)
        self.amps = s.amps.real.copy() if not np.any(s.amps.imag) else s.amps

    def _ranks(self, sites: Sequence[int]) -> tuple[np.ndarray, int]:
        weights = (1 << np.arange(len(sites), dtype=np.int64)).astype(np.float64)
        key = (self.bits[:, list(sites)] @ weights).astype(np.int64)
        space = 1 << len(sites)
        if space <= 4 * self.size:
            present = np.zeros(space, dtype=bool)
            present[key] = True
            rank = np.cumsum(present) - 1
            return rank[key], int(rank[-1]) + 1
        uniq, inverse = np.unique(key, return_inverse=True)
        return inverse, uniq.size

    def matrix(self, sites_a: Sequence[int]):
        a_set = set(sites_a)
        sites_b = [i for i in range(self.n) if i not in a_set]
        ra, na = self._ranks(sites_a)
        rb, nb = self._ranks(sites_b)
        entries = na * nb
        if entries <= _DENSE_MATRIX_MAX or (min(na, nb) <= DENSE_EIG_MAX_DIM and entries <= _DENSE_THIN_MAX):
            mat = np.zeros((na, nb), dtype=self.amps.dtype)
            mat[ra, rb] = self.amps
            return mat
        return sp.csr_matrix((self.amps, (ra, rb)), shape=(na, nb))

    def max_schmidt_sq(self, sites_a: Sequence[int]) -> float:
        mat = self.matrix(sites_a)
        if mat.shape[0] > mat.shape[1]:
            mat = mat.T
        dim = mat.shape[0]
        if sp.issparse(mat):
            mat = sp.csr_matrix(mat)
            mh = mat.conj().T.tocsr()
            if dim <= DENSE_EIG_MAX_DIM:
                return float(np.linalg.eigvalsh((mat @ mh).toarray())[-1])
            mu = _power_top_eigenvalue(lambda v: mat @ (mh @ v), dim, real=not np.iscomplexobj(mat))
            if mu is None:
                return float(np.linalg.eigvalsh((mat @ mh).toarray())[-1])
            return mu
        return largest_eigenvalue_psd(mat @ mat.conj().T)


def amplitude_matrix(s: PureState, sites_a: Sequence[int]):
    """Amplitude matrix for side ``sites_a`` with empty rows and columns dropped.

    Returned dense when small, else as CSR.  Real amplitudes give a real matrix.
    """
    return _CutEvaluator(s).matrix(sites_a)


def max_schmidt_sq(s: PureState, cut: Bipartition | Iterable[int]) -> float:
    """Largest squared Schmidt coefficient of ``s`` across ``cut``.

    ``cut`` may be a :class:`Bipartition` or a raw collection of sites taken
    literally as side A (no canonicalization).
    """
    if not s.is_normalized(NORM_TOL * 1e2):
        raise DomainError("max_schmidt_sq requires a normalized state")
    if isinstance(cut, Bipartition):
        if cut.n != s.num_sites:
            raise DomainError(f"cut is for {cut.n} sites, state has {s.num_sites}")
        sites = cut.part_a
    else:
        sites = sorted({int(x) for x in cut})
        if not sites or len(sites) >= s.num_sites or sites[0] < 0 or sites[-1] >= s.num_sites:
            raise DomainError(f"invalid cut side {sites}")
    return _CutEvaluator(s).max_schmidt_sq(sites)


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("FRUSTRANT_THREADS", "1")))
    except ValueError:
        return 1


def _scan(s: PureState, cuts: Sequence[Bipartition], workers: int | None) -> list[float]:
    workers = _thread_count() if workers is None else max(1, workers)
    ev = _CutEvaluator(s)
    if workers == 1 or len(cuts) < 2 * workers:
        return [ev.max_schmidt_sq(c.part_a) for c in cuts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: ev.max_schmidt_sq(c.part_a), cuts))


def ggm(
    s: PureState,
    cuts: Sequence[Bipartition] | None = None,
    *,
    max_sites: int = DEFAULT_MAX_SITES,
    keep_per_partition: bool = False,
    workers: int | None = None,
) -> GgmResult:
    """Generalized geometric measure of ``s``.

    With an explicit ``cuts`` list the maximum is restricted to those cuts,
    so the returned GGM is an upper bound on the true value and the result
    is flagged ``restricted``.
    """
    if not s.is_normalized(NORM_TOL * 1e2):
        raise DomainError("ggm requires a normalized state")
    restricted = cuts is not None
    if cuts is None:
        if s.num_sites > max_sites:
            raise ResourceCapError(
                f"exhaustive scan over {s.num_sites} sites exceeds cap of {max_sites}; pass a cut list"
            )
        cuts = enumerate_bipartitions(s.num_sites)
    else:
        cuts = list(cuts)
        if not cuts:
            raise DomainError("empty cut list")
        if any(c.n != s.num_sites for c in cuts):
            raise DomainError("cut site count does not match state")
    values = _scan(s, cuts, workers)
    best = int(np.argmax(values))  # first maximum wins ties
    lam = values[best]
    g = 0.0 if lam > 1.0 - ZERO_GGM_TOL else 1.0 - lam
    per = dict(zip(cuts, values)) if keep_per_partition else None
    return GgmResult(g, lam, cuts[best], per, restricted)


def dominant_partition_size_scan(
    s: PureState, cuts: Sequence[Bipartition] | None = None, *, workers: int | None = None
) -> dict[int, float]:
    """Map from smaller-side size ``k`` to the largest squared Schmidt value among cuts of that size."""
    if not s.is_normalized(NORM_TOL * 1e2):
        raise DomainError("dominant_partition_size_scan requires a normalized state")
    if cuts is None:
        cuts = enumerate_bipartitions(s.num_sites)
    values = _scan(s, list(cuts), workers)
    out: dict[int, float] = {}
    for c, v in zip(cuts, values):
        if v > out.get(c.size, -1.0):
            out[c.size] = v
    return dict(sorted(out.items()))


def dominant_size(scan: dict[int, float]) -> int:
    """Smallest cut size attaining the global maximum of a size scan."""
    top = max(scan.values())
    return min(k for k, v in scan.items() if v >= top - 1e-12)
