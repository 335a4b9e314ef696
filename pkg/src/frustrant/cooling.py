"""Cooling by projection onto a degenerate ground manifold.

An initial product state is projected onto the span of the ground states and
renormalized.  Because the result depends on the initial state, the GGM of
the cooled state can also be maximized over a grid of initial product states.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, OrthogonalInitialError
from .frustration import IsingHamiltonian, classical_ground_states
from .ggm import DEFAULT_MAX_SITES, Bipartition, GgmResult, ggm
from .state import PureState, SiteState, inner_product, normalize, superpose

RANK_TOL = 1e-10
OVERLAP_TOL = 1e-12


@dataclass(frozen=True)
class GroundManifold:
    num_sites: int
    spanning_states: tuple[PureState, ...]
    orthonormal_basis: tuple[PureState, ...]

    @property
    def dimension(self) -> int:
        return len(self.orthonormal_basis)

    def apply_projector(self, s: PureState) -> PureState:
        """``sum_i |G_i><G_i|s>`` over the orthonormal basis."""
        terms = [(inner_product(g, s), g) for g in self.orthonormal_basis]
        return superpose(terms)


@dataclass(frozen=True)
class CoolingResult:
    cooled: PureState
    initial: tuple[SiteState, ...]
    overlap_norm: float


def build_manifold(states: Sequence[PureState]) -> GroundManifold:
    """Orthonormalize a (possibly overcomplete) spanning set.

    Modified Gram-Schmidt with one reorthogonalization pass; a vector whose
    residual norm drops below ``RANK_TOL`` times its input norm is dependent.
    """
    if not states:
        raise DomainError("ground manifold needs at least one state")
    n = states[0].num_sites
    if any(s.num_sites != n for s in states):
        raise DomainError("ground states have different site counts")
    basis: list[PureState] = []
    for s in states:
        nrm = s.norm()
        if nrm == 0.0:
            continue
        v = s
        for _ in range(2):
            for b in basis:
                v = superpose([(1.0, v), (-inner_product(b, v), b)])
        if v.norm() > RANK_TOL * nrm:
            basis.append(normalize(v))
    if not basis:
        raise DomainError("all spanning states are zero")
    return GroundManifold(n, tuple(states), tuple(basis))


def product_amplitudes(indices: np.ndarray, initial: Sequence[SiteState]) -> np.ndarray:
    """Amplitudes of the product state ``initial`` at the given basis indices."""
    amp = np.ones(indices.shape, dtype=np.complex128)
    for i, site in enumerate(initial):
        a, b = site.components()
        amp *= np.where((indices >> i) & 1, b, a)
    return amp


def _check_initial(initial: Sequence[SiteState], n: int) -> tuple[SiteState, ...]:
    initial = tuple(s if isinstance(s, SiteState) else SiteState(*s) for s in initial)
    if len(initial) != n:
        raise DomainError(f"initial state has {len(initial)} sites, manifold has {n}")
    return initial


def project(manifold: GroundManifold, initial: Sequence[SiteState]) -> CoolingResult:
    initial = _check_initial(initial, manifold.num_sites)
    coeffs = [
        complex(np.sum(np.conj(g.amps) * product_amplitudes(g.indices, initial)))
        for g in manifold.orthonormal_basis
    ]
    overlap = math.sqrt(sum(abs(c) ** 2 for c in coeffs))
    if overlap < OVERLAP_TOL:
        raise OrthogonalInitialError("initial product state is orthogonal to the ground manifold")
    raw = superpose(list(zip(coeffs, manifold.orthonormal_basis)))
    return CoolingResult(normalize(raw), initial, overlap)


def cooled_state_classical(hi: IsingHamiltonian, initial: Sequence[SiteState]) -> CoolingResult:
    """Projection onto the span of the classical ground configurations of ``hi``."""
    initial = _check_initial(initial, hi.num_sites)
    configs = np.array(classical_ground_states(hi).configs, dtype=np.int64)
    amps = product_amplitudes(configs, initial)
    overlap = float(np.sqrt(np.sum(np.abs(amps) ** 2)))
    if overlap < OVERLAP_TOL:
        raise OrthogonalInitialError("initial product state is orthogonal to the ground manifold")
    return CoolingResult(PureState(hi.num_sites, configs, amps / overlap), initial, overlap)


def bloch_grid(steps: int) -> list[SiteState]:
    """Site states on a (theta, phi) grid: theta = k*pi/steps for k = 0..steps, phi = 2*pi*l/steps."""
    if steps < 1:
        raise DomainError("grid needs at least one step")
    return [
        SiteState.bloch(math.pi * k / steps, 2 * math.pi * l / steps)
        for k in range(steps + 1)
        for l in range(steps)
    ]


def optimize_initial_ggm(
    manifold: GroundManifold,
    steps: int = 24,
    site_classes: Sequence[int] | None = None,
    cuts: Sequence[Bipartition] | None = None,
    max_sites: int = DEFAULT_MAX_SITES,
) -> tuple[CoolingResult, GgmResult]:
    """Grid search over initial product states for the largest cooled-state GGM.

    Sites sharing a class label get the same single-site state; by default all
    sites are identical.  The best grid value is a lower bound on the optimum
    over all product states.  Ties keep the first point in scan order.
    """
    n = manifold.num_sites
    classes = [0] * n if site_classes is None else [int(c) for c in site_classes]
    if len(classes) != n:
        raise DomainError("site_classes must label every site")
    labels = sorted(set(classes))
    grid = bloch_grid(steps)
    best: tuple[CoolingResult, GgmResult] | None = None
    for choice in itertools.product(grid, repeat=len(labels)):
        per_class = dict(zip(labels, choice))
        try:
            res = project(manifold, [per_class[c] for c in classes])
        except OrthogonalInitialError:
            continue
        g = ggm(res.cooled, cuts, max_sites=max_sites)
        if best is None or g.ggm > best[1].ggm:
            best = (res, g)
    if best is None:
        raise OrthogonalInitialError("every grid point is orthogonal to the ground manifold")
    return best
