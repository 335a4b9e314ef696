"""Isingization, classical ground-state enumeration and the frustration degree.

A quantum spin Hamiltonian is reduced to a classical Ising one by replacing
every term (a Pauli product or a Heisenberg link) with a z-only term on the
same sites and with the same coupling.  The frustration degree averages, over
all classical ground configurations, the ratio between the total energy of
positive-contributing terms and the modulus of negative-contributing ones.

Energies are evaluated exactly whenever the couplings are rational (ints,
``Fraction`` or decimal floats): couplings are rescaled to integers and the
2**N enumeration runs in int64.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Integral, Real
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateDenominatorError, DomainError, ResourceCapError

MAX_ENUM_SITES = 24
FLOAT_TIE_TOL = 1e-9
_CHUNK = 1 << 20
_AXES = ("x", "y", "z")


def _as_coupling(c) -> Real:
    if isinstance(c, (Integral, Fraction, str)):
        return Fraction(int(c) if isinstance(c, Integral) else c)
    if isinstance(c, float):
        c = float(c)
        if not math.isfinite(c):
            raise DomainError(f"coupling {c} is not finite")
        # decimal reading: 0.1 -> 1/10, keeps exact arithmetic for typed-in values
        return Fraction(repr(c))
    return c


@dataclass(frozen=True)
class SpinHamiltonian:
    """Pauli-product terms plus Heisenberg links ``J sigma_i . sigma_j``.

    ``terms`` holds ``(coupling, ((site, axis), ...))``; an empty link tuple
    is a constant.  ``heisenberg_links`` holds ``(J, i, j)``.
    """

    num_sites: int
    terms: tuple = ()
    heisenberg_links: tuple = ()

    def __post_init__(self):
        terms = []
        for coupling, links in self.terms:
            links = tuple((int(s), str(a).lower()) for s, a in links)
            for s, a in links:
                if not 0 <= s < self.num_sites or a not in _AXES:
                    raise DomainError(f"bad link {(s, a)} for {self.num_sites} sites")
            terms.append((_as_coupling(coupling), links))
        heis = []
        for coupling, i, j in self.heisenberg_links:
            i, j = int(i), int(j)
            if i == j or not (0 <= i < self.num_sites and 0 <= j < self.num_sites):
                raise DomainError(f"bad Heisenberg link ({i}, {j})")
            heis.append((_as_coupling(coupling), i, j))
        for c, *_ in terms + heis:
            if c == 0:
                raise DomainError("couplings must be nonzero")
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "heisenberg_links", tuple(heis))


@dataclass(frozen=True)
class IsingHamiltonian:
    """Classical Hamiltonian ``sum_t c_t prod_{i in S_t} s_i + constant_offset``.

    Terms on identical site sets are merged; merged couplings that cancel
    are dropped.
    """

    num_sites: int
    terms: tuple = ()
    constant_offset: Real = 0

    def __post_init__(self):
        merged: dict[frozenset, Real] = {}
        order: list[frozenset] = []
        offset = _as_coupling(self.constant_offset)
        for coupling, sites in self.terms:
            sites = frozenset(int(s) for s in sites)
            coupling = _as_coupling(coupling)
            if not sites:
                offset = offset + coupling
                continue
            if min(sites) < 0 or max(sites) >= self.num_sites:
                raise DomainError(f"term sites {sorted(sites)} out of range")
            if sites not in merged:
                order.append(sites)
                merged[sites] = coupling
            else:
                merged[sites] = merged[sites] + coupling
        terms = tuple((merged[s], tuple(sorted(s))) for s in order if merged[s] != 0)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "constant_offset", offset)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c, _ in self.terms)

    def scaled(self, factor) -> "IsingHamiltonian":
        factor = _as_coupling(factor)
        return IsingHamiltonian(
            self.num_sites, tuple((c * factor, s) for c, s in self.terms), self.constant_offset * factor
        )

    def energy(self, config: int):
        """Classical energy of one configuration (bit 0 -> +1, bit 1 -> -1)."""
        e = self.constant_offset
        for c, sites in self.terms:
            parity = sum((config >> s) & 1 for s in sites) & 1
            e = e + (-c if parity else c)
        return e


@dataclass(frozen=True)
class GroundStateSet:
    energy: Real
    configs: tuple[int, ...]


@dataclass(frozen=True)
class FrustrationReport:
    degree: Real
    per_ground_state: tuple[tuple[int, Real, Real, Real], ...]
    ground: GroundStateSet
    classification_varies: bool = field(default=False)

    @property
    def degeneracy(self) -> int:
        return len(self.ground.configs)


def isingize(h: SpinHamiltonian) -> IsingHamiltonian:
    terms = []
    for coupling, links in h.terms:
        terms.append((coupling, [s for s, _ in links]))
    for coupling, i, j in h.heisenberg_links:
        terms.append((coupling, [i, j]))
    return IsingHamiltonian(h.num_sites, tuple(terms))


def _masks(hi: IsingHamiltonian) -> np.ndarray:
    return np.array([sum(1 << s for s in sites) for _, sites in hi.terms], dtype=np.int64)


def _integer_couplings(hi: IsingHamiltonian):
    """Integer couplings and their common scale, or ``None`` if not representable."""
    if not hi.exact or not hi.terms:
        return None
    scale = math.lcm(*(c.denominator for c, _ in hi.terms))
    ints = [int(c * scale) for c, _ in hi.terms]
    if sum(abs(x) for x in ints) >= 1 << 62:
        return None
    return np.array(ints, dtype=np.int64), scale


def _signs(configs: np.ndarray, mask: int) -> np.ndarray:
    return 1 - 2 * (np.bitwise_count(configs & mask).astype(np.int64) & 1)


def classical_ground_states(hi: IsingHamiltonian, max_sites: int = MAX_ENUM_SITES) -> GroundStateSet:
    """Exhaustive scan of all ``2**N`` configurations."""
    n = hi.num_sites
    if n > max_sites:
        raise ResourceCapError(f"{n} sites exceeds the enumeration cap of {max_sites}")
    masks = _masks(hi)
    ints = _integer_couplings(hi)
    coup = ints[0] if ints is not None else np.array([float(c) for c, _ in hi.terms])
    best = None
    found: list[np.ndarray] = []
    found_e: list[np.ndarray] = []
    total = 1 << n
    tol = 0 if ints is not None else FLOAT_TIE_TOL
    for start in range(0, total, _CHUNK):
        configs = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        energy = np.zeros(configs.size, dtype=coup.dtype)
        for c, mask in zip(coup, masks):
            energy += c * _signs(configs, int(mask))
        emin = energy.min()
        if best is None or emin < best:
            best = emin
        keep = energy <= emin + tol
        found.append(configs[keep])
        found_e.append(energy[keep])
    configs = np.concatenate(found)
    energies = np.concatenate(found_e)
    configs = configs[energies <= best + tol]
    if ints is not None:
        energy = Fraction(int(best), ints[1]) + hi.constant_offset
    else:
        energy = float(best) + float(hi.constant_offset)
    return GroundStateSet(energy, tuple(int(c) for c in configs))


def frustration_degree(hi: IsingHamiltonian, ground: GroundStateSet | None = None) -> FrustrationReport:
    """Average ratio of frustrating to non-frustrating energy over ground states."""
    if ground is None:
        ground = classical_ground_states(hi)
    if not hi.terms:
        raise DegenerateDenominatorError(ground.configs[0], hi.num_sites)
    masks = _masks(hi)
    configs = np.array(ground.configs, dtype=np.int64)
    ints = _integer_couplings(hi)
    if ints is not None:
        coup = ints[0]
    else:
        coup = np.array([float(c) for c, _ in hi.terms])
    contrib = np.stack([c * _signs(configs, int(m)) for c, m in zip(coup, masks)], axis=1)
    pos = np.where(contrib > 0, contrib, 0).sum(axis=1)
    neg = np.where(contrib < 0, -contrib, 0).sum(axis=1)
    rows = []
    for cfg, p, q in zip(ground.configs, pos, neg):
        if q == 0:
            raise DegenerateDenominatorError(cfg, hi.num_sites)
        if ints is not None:
            scale = ints[1]
            rows.append((cfg, Fraction(int(p), scale), Fraction(int(q), scale), Fraction(int(p), int(q))))
        else:
            rows.append((cfg, float(p), float(q), float(p) / float(q)))
    if ints is not None:
        degree = sum((r[3] for r in rows), Fraction(0)) / len(rows)
    else:
        degree = math.fsum(r[3] for r in rows) / len(rows)
    signs = np.sign(contrib)
    varies = bool(np.any(signs.max(axis=0) != signs.min(axis=0)))
    return FrustrationReport(degree, tuple(rows), ground, varies)


def frustration_analytic(model: str, **params) -> Real:
    """Closed-form frustration degree for the built-in model families.

    ``ising_gas`` takes ``m`` and ``lam``; ``ising_ring`` takes ``m``;
    ``shastry_sutherland`` takes ``j2_over_j1``; ``majumdar_ghosh`` and
    ``j1j2j3`` take no parameters.
    """
    tag = model.replace("-", "_")
    if tag == "ising_gas":
        m, lam = params["m"], _as_coupling(params.get("lam", 0))
        if m < 1 or not 0 <= lam <= 1:
            raise DomainError("ising_gas needs m >= 1 and 0 <= lam <= 1")
        return (1 + 2 * lam - lam * lam - Fraction(1, m)) / (1 + lam) ** 2
    if tag == "ising_ring":
        m = params["m"]
        if m < 1:
            raise DomainError("ising_ring needs m >= 1")
        return Fraction(1, 2 * m - 1)
    if tag in ("shastry_sutherland", "ss"):
        r = _as_coupling(params["j2_over_j1"])
        if r <= 0:
            raise DomainError("j2_over_j1 must be positive")
        return 1 / (1 + r / 2)
    if tag in ("majumdar_ghosh", "mg", "j1j2j3"):
        return Fraction(1, 2)
    raise DomainError(f"unknown model tag {model!r}")


_TERM_RE = re.compile(r"^(\d+):([xyzXYZ])$")


def parse_hamiltonian(text: str) -> SpinHamiltonian:
    """Read the line-oriented Hamiltonian format.

    ``term <coupling> <site:axis> ...`` adds a Pauli product;
    ``heis <J> <i> <j>`` adds a Heisenberg link; ``sites <N>`` fixes the
    site count (otherwise the largest index plus one).  ``#`` starts a comment.
    """
    terms, heis = [], []
    n = None
    top = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *rest = line.split()
        try:
            if kind == "sites":
                n = int(rest[0])
            elif kind == "term":
                coupling = Fraction(rest[0])
                links = []
                for tok in rest[1:]:
                    mt = _TERM_RE.match(tok)
                    if not mt:
                        raise ValueError(tok)
                    links.append((int(mt.group(1)), mt.group(2).lower()))
                    top = max(top, links[-1][0])
                terms.append((coupling, tuple(links)))
            elif kind == "heis":
                coupling, i, j = Fraction(rest[0]), int(rest[1]), int(rest[2])
                if len(rest) != 3:
                    raise ValueError(line)
                heis.append((coupling, i, j))
                top = max(top, i, j)
            else:
                raise ValueError(kind)
        except (ValueError, IndexError, ZeroDivisionError) as exc:
            raise DomainError(f"line {lineno}: cannot parse {raw.strip()!r}") from exc
    if n is None:
        n = top + 1
    if n < 1:
        raise DomainError("Hamiltonian has no sites")
    return SpinHamiltonian(n, tuple(terms), tuple(heis))


def format_hamiltonian(h: SpinHamiltonian) -> str:
    lines = [f"sites {h.num_sites}"]
    for c, links in h.terms:
        lines.append(" ".join(["term", str(c)] + [f"{s}:{a}" for s, a in links]))
    for c, i, j in h.heisenberg_links:
        lines.append(f"heis {c} {i} {j}")
    return "\n".join(lines) + "\n"


def load_hamiltonian(path: str | Path) -> SpinHamiltonian:
    return parse_hamiltonian(Path(path).read_text())


def ring_ising(n: int, couplings: Sequence) -> IsingHamiltonian:
    """Periodic nearest-neighbour z-z ring; ``couplings[i]`` couples ``i`` and ``i+1``."""
    if len(couplings) != n:
        raise DomainError("need one coupling per ring bond")
    return IsingHamiltonian(n, tuple((c, (i, (i + 1) % n)) for i, c in enumerate(couplings)))
