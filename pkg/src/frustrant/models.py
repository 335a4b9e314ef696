"""The six frustrated spin models: Hamiltonians, cooled states and closed forms.

Site conventions
----------------
* Ising gas, RVB gas, Ising ring, Majumdar-Ghosh: ``2m`` sites ``0..2m-1``.
  The RVB black sublattice is ``0..m-1``, the white one ``m..2m-1``.
* Plaquettes: each plaquette is a 4-tuple (top-left, top-right, bottom-left,
  bottom-right).  ``|hh>`` pairs TL-TR and BL-BR, ``|vv>`` pairs TL-BL and
  TR-BR, singlets oriented as listed.
* Majumdar-Ghosh: the two dimer coverings pair ``{2k, 2k+1}`` and
  ``{2k+1, 2k+2}`` (mod 2m).  Every singlet starts on the odd index, which
  fixes the relative sign between the coverings so that they overlap
  positively.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cooling import cooled_state_classical
from .errors import DomainError, ResourceCapError
from .frustration import IsingHamiltonian, SpinHamiltonian, _as_coupling, isingize
from .ggm import Bipartition
from .state import Pairing, PureState, SiteState, normalize, singlet_product, superpose

MAX_RVB_M = 8
_INV_SQRT2 = 1.0 / math.sqrt(2.0)

MODEL_TAGS = ("ising_gas", "rvb", "j1j2j3", "mg", "ss", "ising_ring")


# ---------------------------------------------------------------------------
# Ising gas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GasParams:
    m: int
    lam: Fraction = Fraction(0)
    j: Fraction = Fraction(1)

    def __post_init__(self):
        lam = _as_coupling(self.lam)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "j", _as_coupling(self.j))
        if self.m < 1:
            raise DomainError("Ising gas needs m >= 1")
        if not 0 <= lam <= 1:
            raise DomainError("lambda must lie in [0, 1]")
        if (self.m * lam).denominator != 1:
            raise DomainError(f"m*lambda must be an integer (m={self.m}, lambda={lam})")
        if self.j <= 0:
            raise DomainError("J must be positive")

    @property
    def num_ones(self) -> int:
        return int(self.m * (1 - self.lam))


def fixed_weight_indices(n: int, weight: int) -> np.ndarray:
    """All n-bit indices with exactly ``weight`` set bits, ascending."""
    out = [sum(1 << i for i in c) for c in itertools.combinations(range(n), weight)]
    return np.sort(np.array(out, dtype=np.int64))


def ising_gas_state(p: GasParams) -> PureState:
    n = 2 * p.m
    idx = fixed_weight_indices(n, p.num_ones)
    return PureState(n, idx, np.full(idx.size, 1.0 / math.sqrt(idx.size)))


def ising_gas_partition_eigs(m: int, n: int) -> list[Fraction]:
    """Nonzero reduced eigenvalues of the lambda = 0 gas on ``n`` of ``2m`` sites."""
    if not 1 <= n <= m:
        raise DomainError(f"need 1 <= n <= m, got n={n}, m={m}")
    total = math.comb(2 * m, m)
    eigs = [Fraction(math.comb(n, j) * math.comb(2 * m - n, m - j), total) for j in range(n + 1)]
    return sorted(eigs, reverse=True)


def ising_gas_ggm_analytic(m: int) -> Fraction:
    if m < 1:
        raise DomainError("m must be >= 1")
    return Fraction(m - 1, 2 * m - 1)


def ising_gas_hamiltonian(p: GasParams) -> SpinHamiltonian:
    """Expansion of ``(J/2m)(S - 2m lam)^2`` into pair, field and constant terms."""
    n = 2 * p.m
    terms = [(p.j / p.m, ((i, "z"), (k, "z"))) for i in range(n) for k in range(i + 1, n)]
    if p.lam:
        terms += [(-2 * p.j * p.lam, ((i, "z"),)) for i in range(n)]
    terms.append((p.j + 2 * p.m * p.j * p.lam**2, ()))
    return SpinHamiltonian(n, tuple(terms))


def ising_gas_cuts(m: int) -> list[Bipartition]:
    """One cut per size; sufficient because the state is permutation symmetric."""
    n = 2 * m
    return [Bipartition(range(k), n) for k in range(1, m + 1)]


# ---------------------------------------------------------------------------
# RVB gas
# ---------------------------------------------------------------------------


def rvb_state(m: int) -> PureState:
    """Coherent sum of all ``m!`` black-to-white singlet coverings."""
    if not 1 <= m <= MAX_RVB_M:
        raise ResourceCapError(f"RVB gas is capped at m <= {MAX_RVB_M}, got {m}")
    n = 2 * m
    # black bit pattern x: black site i holds x_i, its white partner holds 1 - x_i
    x = np.arange(1 << m, dtype=np.int64)
    black_bits = (x[:, None] >> np.arange(m)) & 1
    sign = np.where(np.bitwise_count(x) & 1, -1.0, 1.0) * _INV_SQRT2**m
    idx_parts = []
    for perm in itertools.permutations(range(m)):
        white = ((1 - black_bits) << (m + np.array(perm))).sum(axis=1)
        idx_parts.append(x | white)
    idx = np.concatenate(idx_parts)
    amps = np.tile(sign, len(idx_parts))
    return normalize(PureState(n, idx, amps))


def rvb_coverings(m: int) -> list[PureState]:
    n = 2 * m
    return [
        singlet_product(Pairing((i, m + perm[i]) for i in range(m)), n)
        for perm in itertools.permutations(range(m))
    ]


def rvb_hamiltonian(m: int, j=1) -> SpinHamiltonian:
    j = _as_coupling(j)
    n = 2 * m
    links = [(j / m, a, b) for a in range(n) for b in range(a + 1, n)]
    return SpinHamiltonian(n, heisenberg_links=tuple(links))


# ---------------------------------------------------------------------------
# J1-J2-J3 plaquette model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlaquetteLayout:
    """Plaquettes as (TL, TR, BL, BR) site tuples.

    ``density_v`` is the number of vertical-singlet plaquettes.  ``None``
    means the unconstrained superposition ``prod_k (|hh> + |vv>)_k``, which
    for a single plaquette is the equal superposition ``|hh> + |vv>``.
    """

    plaquettes: tuple[tuple[int, int, int, int], ...]
    density_v: int | None = None

    def __post_init__(self):
        plaqs = tuple(tuple(int(s) for s in p) for p in self.plaquettes)
        object.__setattr__(self, "plaquettes", plaqs)
        sites = [s for p in plaqs for s in p]
        if not plaqs or any(len(p) != 4 for p in plaqs):
            raise DomainError("each plaquette needs exactly 4 sites")
        if sorted(sites) != list(range(len(sites))):
            raise DomainError("plaquettes must partition sites 0..N-1")
        if self.density_v is not None and not 0 <= self.density_v <= len(plaqs):
            raise DomainError(f"density_v must be in 0..{len(plaqs)}")

    @property
    def num_sites(self) -> int:
        return 4 * len(self.plaquettes)


def plaquette_chain(num_plaquettes: int, density_v: int | None = None) -> PlaquetteLayout:
    """A 1xP row of plaquettes; plaquette ``p`` owns sites ``4p..4p+3``."""
    return PlaquetteLayout(tuple(tuple(range(4 * p, 4 * p + 4)) for p in range(num_plaquettes)), density_v)


def plaquette_square(m: int, density_v: int | None = None) -> PlaquetteLayout:
    """``m x m`` plaquettes on a ``2m x 2m`` lattice, sites numbered row-major."""
    w = 2 * m
    plaqs = []
    for r in range(m):
        for c in range(m):
            x, y = 2 * c, 2 * r
            plaqs.append((y * w + x, y * w + x + 1, (y + 1) * w + x, (y + 1) * w + x + 1))
    return PlaquetteLayout(tuple(plaqs), density_v)


def _hh_pairs(p):
    tl, tr, bl, br = p
    return [(tl, tr), (bl, br)]


def _vv_pairs(p):
    tl, tr, bl, br = p
    return [(tl, bl), (tr, br)]


def plaquette_state(layout: PlaquetteLayout) -> PureState:
    n = layout.num_sites
    plaqs = layout.plaquettes
    count = len(plaqs)

    def covering(vertical: set[int]) -> PureState:
        pairs = []
        for k, p in enumerate(plaqs):
            pairs += _vv_pairs(p) if k in vertical else _hh_pairs(p)
        return singlet_product(Pairing(pairs), n)

    if layout.density_v is None:
        choices = itertools.chain.from_iterable(itertools.combinations(range(count), v) for v in range(count + 1))
    else:
        choices = itertools.combinations(range(count), layout.density_v)
    return normalize(superpose([(1.0, covering(set(c))) for c in choices]))


# Orbit representatives of a plaquette's 16 subsets under left-right and
# up-down reflections, both of which leave |hh> and |vv> invariant.
_PLAQUETTE_SUBSET_TYPES = ((), (0,), (0, 1), (0, 2), (0, 3), (0, 1, 2), (0, 1, 2, 3))


def plaquette_cuts(layout: PlaquetteLayout) -> list[Bipartition]:
    """Cuts covering every symmetry class of the plaquette state.

    The state is invariant under permuting plaquettes and under reflecting any
    single plaquette, so a cut is determined (up to an equivalent cut) by the
    multiset of per-plaquette subset types.
    """
    n = layout.num_sites
    plaqs = layout.plaquettes
    seen: dict[Bipartition, None] = {}
    for combo in itertools.combinations_with_replacement(range(len(_PLAQUETTE_SUBSET_TYPES)), len(plaqs)):
        side = [plaqs[k][i] for k, t in enumerate(combo) for i in _PLAQUETTE_SUBSET_TYPES[t]]
        if 0 < len(side) < n:
            seen.setdefault(Bipartition(side, n), None)
    return sorted(seen, key=lambda c: (len(c.part_a), c.part_a))


def j1j2j3_hamiltonian(rows: int, cols: int, j1=1, j2=0, j3=0, periodic: bool = False) -> SpinHamiltonian:
    """Heisenberg J1-J2-J3 model on a grid of ``rows x cols`` plaquettes.

    J1 couples every pair inside a plaquette (edges and diagonals).  J2
    couples nearest and diagonal neighbours in edge-adjacent plaquettes, J3
    couples next-nearest (distance 2) and knight's-move neighbours there.
    """
    j1, j2, j3 = (_as_coupling(x) for x in (j1, j2, j3))
    w, h = 2 * cols, 2 * rows
    links: dict[tuple[int, int], Fraction] = {}

    def disp(a, b, size):
        d = b - a
        if periodic:
            d = (d + size // 2) % size - size // 2
        return d

    for s in range(w * h):
        for t in range(s + 1, w * h):
            xs, ys, xt, yt = s % w, s // w, t % w, t // w
            pr = disp(ys // 2, yt // 2, rows)
            pc = disp(xs // 2, xt // 2, cols)
            dx, dy = abs(disp(xs, xt, w)), abs(disp(ys, yt, h))
            d2 = dx * dx + dy * dy
            if pr == 0 and pc == 0:
                c = j1
            elif abs(pr) + abs(pc) == 1:
                c = j2 if d2 in (1, 2) else j3 if d2 in (4, 5) else 0
            else:
                c = 0
            if c:
                links[(s, t)] = c
    return SpinHamiltonian(w * h, heisenberg_links=tuple((c, s, t) for (s, t), c in links.items()))


# ---------------------------------------------------------------------------
# Majumdar-Ghosh
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MgParams:
    m: int
    alpha: complex = 1.0

    def __post_init__(self):
        if self.m < 2:
            raise DomainError("Majumdar-Ghosh chain needs m >= 2")
        object.__setattr__(self, "alpha", complex(self.alpha))


def mg_pairings(m: int) -> tuple[Pairing, Pairing]:
    n = 2 * m
    first = Pairing((2 * k + 1, 2 * k) for k in range(m))
    second = Pairing((2 * k + 1, (2 * k + 2) % n) for k in range(m))
    return first, second


def mg_ground_states(m: int) -> tuple[PureState, PureState]:
    if m < 2:
        raise DomainError("Majumdar-Ghosh chain needs m >= 2")
    first, second = mg_pairings(m)
    return singlet_product(first, 2 * m), singlet_product(second, 2 * m)


def mg_cooled_state(p: MgParams) -> PureState:
    g1, g2 = mg_ground_states(p.m)
    return normalize(superpose([(1.0, g1), (p.alpha, g2)]))


def mg_eigs_analytic(m: int, alpha: float) -> tuple[float, float]:
    """Top eigenvalues of the reduced states on sites {0,1} and {1,2}, real ``alpha``."""
    if m < 2:
        raise DomainError("m must be >= 2")
    p2 = 2.0**m
    den = 4 * (p2 + 4 * alpha + p2 * alpha**2)
    if den == 0:
        raise DomainError("vanishing denominator")
    e1 = (4 * p2 + 16 * alpha + p2 * alpha**2) / den
    e2 = (p2 + 16 * alpha + 4 * p2 * alpha**2) / den
    return e1, e2


def mg_ggm_analytic(m: int) -> Fraction:
    if m < 2:
        raise DomainError("m must be >= 2")
    # 3 / (8 + 2**(4 - m)) with integers only
    return Fraction(3 * 2**m, 2 ** (m + 3) + 16)


def mg_hamiltonian(m: int, j1=1) -> SpinHamiltonian:
    j1 = _as_coupling(j1)
    n = 2 * m
    links = [(j1, i, (i + 1) % n) for i in range(n)]
    links += [(j1 / 2, i, (i + 2) % n) for i in range(n)]
    return SpinHamiltonian(n, heisenberg_links=tuple(links))


# ---------------------------------------------------------------------------
# Shastry-Sutherland
# ---------------------------------------------------------------------------


def ss_lattice(lx: int, ly: int) -> tuple[list[tuple[int, int]], Pairing]:
    """Periodic ``lx x ly`` lattice: nearest-neighbour bonds and the diagonal dimers.

    Dimers sit on alternating plaquettes with alternating orientation, so
    every site belongs to exactly one dimer.
    """
    if lx < 2 or ly < 2 or lx % 2 or ly % 2:
        raise DomainError("Shastry-Sutherland lattice needs even lx, ly >= 2")

    def site(x, y):
        return (y % ly) * lx + (x % lx)

    bonds = set()
    for y in range(ly):
        for x in range(lx):
            for t in (site(x + 1, y), site(x, y + 1)):
                s = site(x, y)
                if s != t:
                    bonds.add((min(s, t), max(s, t)))
    dimers = []
    for y in range(0, ly, 2):
        for x in range(0, lx, 2):
            dimers.append((site(x, y), site(x + 1, y + 1)))
            dimers.append((site(x + 2, y + 1), site(x + 1, y + 2)))
    return sorted(bonds), Pairing(tuple(sorted((min(a, b), max(a, b)) for a, b in dimers)))


def ss_ground_state(diagonal_pairs: Pairing | Sequence[tuple[int, int]], n: int) -> PureState:
    """Dimer-product ground state of the J1/J2 < 1/2 regime."""
    return singlet_product(diagonal_pairs if isinstance(diagonal_pairs, Pairing) else Pairing(diagonal_pairs), n)


def ss_hamiltonian(lx: int, ly: int, j1=1, j2=4) -> SpinHamiltonian:
    j1, j2 = _as_coupling(j1), _as_coupling(j2)
    bonds, dimers = ss_lattice(lx, ly)
    links = [(j1, a, b) for a, b in bonds] + [(j2, a, b) for a, b in dimers.pairs]
    return SpinHamiltonian(lx * ly, heisenberg_links=tuple(links))


# ---------------------------------------------------------------------------
# Ising ring
# ---------------------------------------------------------------------------


def ising_ring_hamiltonian(m: int, j=1) -> SpinHamiltonian:
    """Ferromagnetic ring of ``2m`` sites with one antiferromagnetic bond (2m-1, 0)."""
    if m < 1:
        raise DomainError("m must be >= 1")
    j = _as_coupling(j)
    n = 2 * m
    terms = [(-j, ((i, "z"), (i + 1, "z"))) for i in range(n - 1)]
    terms.append((j, ((n - 1, "z"), (0, "z"))))
    return SpinHamiltonian(n, tuple(terms))


def ising_ring_cooled_state(m: int) -> PureState:
    """Projection of ``|+>^N`` onto the classical ground configurations."""
    if m < 2:
        raise DomainError("m must be >= 2")
    hi = isingize(ising_ring_hamiltonian(m))
    return cooled_state_classical(hi, [SiteState.plus()] * (2 * m)).cooled


def ising_ring_ground_configs(m: int) -> list[int]:
    """Single-domain-wall configurations: ``0^a 1^(2m-a)`` and ``1^a 0^(2m-a)``."""
    n = 2 * m
    full = (1 << n) - 1
    out = set()
    for a in range(n + 1):
        # sites 0..a-1 hold 0, the rest hold 1
        ones_tail = full & ~((1 << a) - 1)
        out.add(ones_tail)
        out.add(full ^ ones_tail)
    return sorted(out)


def ising_ring_ggm_analytic(m: int) -> float:
    """``(3m - 1 - sqrt(4 + m^2)) / (4m)``: one minus the top eigenvalue on a
    nearest-neighbour pair.

    Single-site cuts of the same state give the larger eigenvalue
    ``(m + 1) / (2m)``, so the exhaustive GGM is ``(m - 1) / (2m)``, which is
    smaller than this value; see :func:`ising_ring_ggm_single_site`.
    """
    if m < 1:
        raise DomainError("m must be >= 1")
    return (3 * m - 1 - math.sqrt(4 + m * m)) / (4 * m)


def ising_ring_ggm_single_site(m: int) -> Fraction:
    """``1 - (m + 1)/(2m)``, the GGM bound from any single-site cut."""
    if m < 1:
        raise DomainError("m must be >= 1")
    return Fraction(m - 1, 2 * m)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def _tag(tag: str) -> str:
    t = tag.replace("-", "_").lower()
    aliases = {"plaquette": "j1j2j3", "majumdar_ghosh": "mg", "shastry_sutherland": "ss"}
    t = aliases.get(t, t)
    if t not in MODEL_TAGS:
        raise DomainError(f"unknown model tag {tag!r}")
    return t


def model_hamiltonian(tag: str, **params) -> SpinHamiltonian:
    """Hamiltonian for a model tag.

    ising_gas: m, lam, j; rvb: m, j; j1j2j3: rows, cols, j1, j2, j3,
    periodic; mg: m, j1; ss: lx, ly, j1, j2; ising_ring: m, j.
    """
    t = _tag(tag)
    try:
        if t == "ising_gas":
            return ising_gas_hamiltonian(GasParams(params["m"], params.get("lam", 0), params.get("j", 1)))
        if t == "rvb":
            return rvb_hamiltonian(params["m"], params.get("j", 1))
        if t == "j1j2j3":
            return j1j2j3_hamiltonian(
                params.get("rows", 1),
                params["cols"] if "cols" in params else params.get("plaquettes", 1),
                params.get("j1", 1),
                params.get("j2", 0),
                params.get("j3", 0),
                params.get("periodic", False),
            )
        if t == "mg":
            return mg_hamiltonian(params["m"], params.get("j1", 1))
        if t == "ss":
            return ss_hamiltonian(params.get("lx", 4), params.get("ly", 4), params.get("j1", 1), params.get("j2", 4))
        return ising_ring_hamiltonian(params["m"], params.get("j", 1))
    except KeyError as exc:
        raise DomainError(f"model {tag!r} is missing parameter {exc.args[0]!r}") from exc


def model_ising(tag: str, **params) -> IsingHamiltonian:
    return isingize(model_hamiltonian(tag, **params))
