"""Sparse pure states of N qubits.

A state is stored as two parallel arrays: sorted basis indices and complex
amplitudes.  Site ``i`` is bit ``i`` of the index (site 0 is the least
significant bit); bit value 0 is ``|0>`` (sigma_z = +1) and bit value 1 is
``|1>`` (sigma_z = -1).

Only nonzero amplitudes are kept.  Anything with modulus at or below
``DROP_TOL`` is pruned on construction, which removes residue left by exact
cancellations in superpositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ZeroNormError

DROP_TOL = 1e-14
ZERO_NORM_TOL = 1e-12
NORM_TOL = 1e-12
MAX_SITES = 62

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class PureState:
    """Immutable sparse pure state.

    Parameters
    ----------
    num_sites : int
        Number of qubits N.
    indices : array_like of int
        Basis indices.  Duplicates are summed.
    amps : array_like of complex
        Amplitudes matching ``indices``.
    """

    __slots__ = ("num_sites", "indices", "amps")

    def __init__(self, num_sites: int, indices, amps):
        num_sites = int(num_sites)
        if not 1 <= num_sites <= MAX_SITES:
            raise DomainError(f"num_sites must be in 1..{MAX_SITES}, got {num_sites}")
        idx = np.asarray(indices, dtype=np.int64).ravel()
        amp = np.asarray(amps, dtype=np.complex128).ravel()
        if idx.shape != amp.shape:
            raise DomainError("indices and amplitudes differ in length")
        if idx.size and (idx.min() < 0 or idx.max() >= (1 << num_sites)):
            raise DomainError(f"basis index out of range for {num_sites} sites")
        if idx.size:
            order = np.argsort(idx, kind="stable")
            idx, amp = idx[order], amp[order]
            if idx.size > 1 and np.any(idx[1:] == idx[:-1]):
                idx, inverse = np.unique(idx, return_inverse=True)
                amp = np.bincount(inverse, weights=amp.real, minlength=idx.size) + 1j * np.bincount(
                    inverse, weights=amp.imag, minlength=idx.size
                )
            keep = np.abs(amp) > DROP_TOL
            idx, amp = idx[keep], amp[keep]
        idx.setflags(write=False)
        amp.setflags(write=False)
        object.__setattr__(self, "num_sites", num_sites)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "amps", amp)

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @classmethod
    def from_dict(cls, num_sites: int, amplitudes: Mapping[int, complex]) -> "PureState":
        keys = list(amplitudes)
        return cls(num_sites, keys, [amplitudes[k] for k in keys])

    @classmethod
    def from_dense(cls, vector: Sequence[complex]) -> "PureState":
        vec = np.asarray(vector, dtype=np.complex128).ravel()
        n = vec.size.bit_length() - 1
        if vec.size != 1 << n or n < 1:
            raise DomainError("dense vector length must be a power of two >= 2")
        idx = np.flatnonzero(vec)
        return cls(n, idx, vec[idx])

    @property
    def amplitudes(self) -> dict[int, complex]:
        return {int(i): complex(a) for i, a in zip(self.indices, self.amps)}

    def amplitude(self, bits: int) -> complex:
        pos = np.searchsorted(self.indices, bits)
        if pos < self.indices.size and self.indices[pos] == bits:
            return complex(self.amps[pos])
        return 0j

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(float(np.sum(np.abs(self.amps) ** 2)) - 1.0) <= tol

    def to_dense(self) -> np.ndarray:
        vec = np.zeros(1 << self.num_sites, dtype=np.complex128)
        vec[self.indices] = self.amps
        return vec

    def scaled(self, c: complex) -> "PureState":
        return PureState(self.num_sites, self.indices, self.amps * c)

    def __len__(self) -> int:
        return int(self.indices.size)

    def __repr__(self) -> str:
        return f"PureState(num_sites={self.num_sites}, terms={len(self)})"


@dataclass(frozen=True)
class SiteState:
    """Single-qubit state ``a|0> + b|1>``."""

    a: complex
    b: complex

    def __post_init__(self):
        if abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0) > NORM_TOL:
            raise DomainError(f"site state ({self.a}, {self.b}) is not normalized")

    @classmethod
    def bloch(cls, theta: float, phi: float) -> "SiteState":
        return cls(complex(math.cos(theta / 2)), complex(np.exp(1j * phi) * math.sin(theta / 2)))

    @classmethod
    def plus(cls) -> "SiteState":
        return cls(complex(_INV_SQRT2), complex(_INV_SQRT2))

    def components(self) -> tuple[complex, complex]:
        return (complex(self.a), complex(self.b))


@dataclass(frozen=True)
class Pairing:
    """Ordered site pairs; ``(i, j)`` is the singlet ``(|0_i 1_j> - |1_i 0_j>)/sqrt(2)``."""

    pairs: tuple[tuple[int, int], ...]

    def __init__(self, pairs: Iterable[tuple[int, int]]):
        pairs = tuple((int(i), int(j)) for i, j in pairs)
        flat = [s for p in pairs for s in p]
        if len(set(flat)) != len(flat):
            raise DomainError(f"pairing {pairs} repeats a site")
        if any(s < 0 for s in flat):
            raise DomainError("negative site index in pairing")
        object.__setattr__(self, "pairs", pairs)

    def sites(self) -> set[int]:
        return {s for p in self.pairs for s in p}

    def reversed(self) -> "Pairing":
        return Pairing((j, i) for i, j in self.pairs)


def _check_sites(n: int) -> int:
    n = int(n)
    if not 1 <= n <= MAX_SITES:
        raise DomainError(f"site count must be in 1..{MAX_SITES}, got {n}")
    return n


def basis_state(bits: int, n: int) -> PureState:
    n = _check_sites(n)
    if not 0 <= bits < (1 << n):
        raise DomainError(f"basis index {bits} out of range for {n} sites")
    return PureState(n, [bits], [1.0])


def product_state(sites: Sequence[SiteState]) -> PureState:
    """Tensor product of single-site states, site 0 first."""
    if not sites:
        raise DomainError("product_state needs at least one site")
    n = _check_sites(len(sites))
    idx = np.zeros(1, dtype=np.int64)
    amp = np.ones(1, dtype=np.complex128)
    for i, s in enumerate(sites):
        if not isinstance(s, SiteState):
            s = SiteState(*s)
        a, b = s.components()
        parts_i, parts_a = [], []
        if abs(a) > 0:
            parts_i.append(idx)
            parts_a.append(amp * a)
        if abs(b) > 0:
            parts_i.append(idx | (1 << i))
            parts_a.append(amp * b)
        idx = np.concatenate(parts_i)
        amp = np.concatenate(parts_a)
    return PureState(n, idx, amp)


def superpose(terms: Sequence[tuple[complex, PureState]]) -> PureState:
    """Linear combination ``sum_k c_k |s_k>``.  Not normalized."""
    if not terms:
        raise DomainError("superpose needs at least one term")
    n = terms[0][1].num_sites
    if any(s.num_sites != n for _, s in terms):
        raise DomainError("superpose: states have different site counts")
    idx = np.concatenate([s.indices for _, s in terms])
    amp = np.concatenate([s.amps * complex(c) for c, s in terms])
    return PureState(n, idx, amp)


def inner_product(a: PureState, b: PureState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.num_sites != b.num_sites:
        raise DomainError("inner_product: states have different site counts")
    _, ia, ib = np.intersect1d(a.indices, b.indices, assume_unique=True, return_indices=True)
    return complex(np.sum(np.conj(a.amps[ia]) * b.amps[ib]))


def normalize(s: PureState) -> PureState:
    nrm = s.norm()
    if nrm <= ZERO_NORM_TOL:
        raise ZeroNormError("cannot normalize a zero state")
    return PureState(s.num_sites, s.indices, s.amps / nrm)


def singlet_product(p: Pairing, n: int) -> PureState:
    """Product of singlets covering every site exactly once."""
    n = _check_sites(n)
    if not isinstance(p, Pairing):
        p = Pairing(p)
    covered = p.sites()
    if covered != set(range(n)) or 2 * len(p.pairs) != n:
        raise DomainError(f"pairing {p.pairs} is not a perfect matching of {n} sites")
    idx = np.zeros(1, dtype=np.int64)
    amp = np.ones(1, dtype=np.complex128)
    for i, j in p.pairs:
        # first branch |0_i 1_j> with +, second |1_i 0_j> with -
        idx = np.concatenate([idx | (1 << j), idx | (1 << i)])
        amp = np.concatenate([amp * _INV_SQRT2, amp * -_INV_SQRT2])
    return PureState(n, idx, amp)


def bitstring(bits: int, n: int) -> str:
    """Render a basis index with site 0 leftmost."""
    return "".join("1" if (bits >> i) & 1 else "0" for i in range(n))


def parse_bitstring(text: str) -> int:
    if not text or set(text) - {"0", "1"}:
        raise DomainError(f"invalid bitstring {text!r}")
    return sum(1 << i for i, c in enumerate(text) if c == "1")


def format_state(s: PureState) -> str:
    lines = [f"N={s.num_sites}"]
    for i, a in zip(s.indices, s.amps):
        lines.append(f"{bitstring(int(i), s.num_sites)} {a.real:.17g} {a.imag:.17g}")
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> PureState:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("N="):
        raise DomainError("state file must start with a 'N=<num_sites>' header")
    try:
        n = int(lines[0][2:])
    except ValueError as exc:
        raise DomainError(f"bad header {lines[0]!r}") from exc
    idx, amp = [], []
    for ln in lines[1:]:
        fields = ln.split()
        if len(fields) != 3 or len(fields[0]) != n:
            raise DomainError(f"bad state record {ln!r}")
        idx.append(parse_bitstring(fields[0]))
        amp.append(complex(float(fields[1]), float(fields[2])))
    return PureState(n, idx, amp)


def dump_state(s: PureState, path: str | Path) -> None:
    Path(path).write_text(format_state(s))


def load_state(path: str | Path) -> PureState:
    return parse_state(Path(path).read_text())
