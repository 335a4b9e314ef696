"""Numeric-versus-closed-form cross-checks behind ``frustrant verify``.

Each check compares a brute-force computation with a closed form at a fixed
tolerance and yields a :class:`Check`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import models as M
from .frustration import IsingHamiltonian, frustration_analytic, frustration_degree, ring_ising
from .ggm import dominant_partition_size_scan, dominant_size, ggm, max_schmidt_sq
from .state import Pairing

GGM_TOL = 1e-10
PLAQUETTE_TOL = 5e-3
RVB_TARGET_TOL = 1e-2


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    delta: float
    detail: str = ""


def _eq(name: str, got, want, tol: float, detail: str = "") -> Check:
    delta = abs(float(got) - float(want))
    return Check(name, delta <= tol, delta, detail or f"got {float(got):.12g}, want {float(want):.12g}")


def _exact(name: str, got, want, detail: str = "") -> Check:
    return Check(name, got == want, abs(float(got) - float(want)), detail or f"got {got}, want {want}")


def gas_checks(max_m: int) -> Iterator[Check]:
    for m in range(2, max_m + 1):
        s = M.ising_gas_state(M.GasParams(m))
        r = ggm(s)
        yield _eq(f"gas m={m} ggm", r.ggm, M.ising_gas_ggm_analytic(m), GGM_TOL)
        k = dominant_size(dominant_partition_size_scan(s))
        yield Check(f"gas m={m} dominant cut size", k == 2, float(abs(k - 2)), f"size {k}")
    for m in range(1, min(max_m, 5) + 1):
        s = M.ising_gas_state(M.GasParams(m))
        for n in range(1, m + 1):
            got = np.sort(_reduced_eigs(s, list(range(n))))[::-1]
            got = got[got > 1e-12]
            want = np.array([float(x) for x in M.ising_gas_partition_eigs(m, n)])
            delta = float(np.max(np.abs(got - want))) if got.size == want.size else math.inf
            yield Check(f"gas m={m} n={n} eigenvalues", delta <= GGM_TOL, delta)


def _reduced_eigs(s, sites_a) -> np.ndarray:
    from .ggm import amplitude_matrix

    mat = amplitude_matrix(s, sites_a)
    mat = mat.toarray() if hasattr(mat, "toarray") else mat
    return np.linalg.eigvalsh(mat @ mat.conj().T)


def mg_checks(max_m: int) -> Iterator[Check]:
    for m in range(2, max_m + 1):
        for alpha in (0.5, 1.0, 2.0):
            s = M.mg_cooled_state(M.MgParams(m, alpha))
            e1, e2 = M.mg_eigs_analytic(m, alpha)
            yield _eq(f"mg m={m} alpha={alpha} e1", max_schmidt_sq(s, [0, 1]), e1, GGM_TOL)
            yield _eq(f"mg m={m} alpha={alpha} e2", max_schmidt_sq(s, [1, 2]), e2, GGM_TOL)
        s = M.mg_cooled_state(M.MgParams(m, 1.0))
        yield _eq(f"mg m={m} ggm", ggm(s).ggm, M.mg_ggm_analytic(m), GGM_TOL)
        worst = 0.0
        for k in range(8):
            a = complex(np.exp(2j * math.pi * (k + 0.5) / 8))
            s = M.mg_cooled_state(M.MgParams(m, a))
            worst = max(worst, abs(max_schmidt_sq(s, [0, 1]) - max_schmidt_sq(s, [1, 2])))
        yield Check(f"mg m={m} |alpha|=1 e1==e2", worst < GGM_TOL, worst)


def ring_checks(max_m: int) -> Iterator[Check]:
    for m in range(2, max_m + 1):
        s = M.ising_ring_cooled_state(m)
        yield _exact(f"ring m={m} degeneracy", len(s), 4 * m)
        yield _eq(f"ring m={m} ggm", ggm(s).ggm, M.ising_ring_ggm_analytic(m), GGM_TOL)
        yield _eq(f"ring m={m} pair cut", 1 - max_schmidt_sq(s, [0, 1]), M.ising_ring_ggm_analytic(m), GGM_TOL)
        rep = frustration_degree(M.model_ising("ising_ring", m=m))
        yield _exact(f"ring m={m} frustration", rep.degree, Fraction(1, 2 * m - 1))


def frustration_checks(max_m: int) -> Iterator[Check]:
    tri = ring_ising(3, [1, 1, 1])
    rep = frustration_degree(tri)
    yield _exact("triangle frustration", rep.degree, Fraction(1, 2))
    yield _exact("triangle degeneracy", rep.degeneracy, 6)
    sq = ring_ising(4, [1, 1, 1, 1])
    rep = frustration_degree(sq)
    yield _exact("square frustration", rep.degree, Fraction(0))
    yield _exact("square degeneracy", rep.degeneracy, 2)
    for m in range(1, min(max_m, 5) + 1):
        for lam in sorted({Fraction(0), Fraction(1, m)}):
            rep = frustration_degree(M.model_ising("ising_gas", m=m, lam=lam))
            printed = (1 + 2 * lam - lam**2 - Fraction(1, m)) / (1 + lam**2)
            yield _exact(f"gas m={m} lam={lam} frustration (printed form)", rep.degree, printed)
            yield _exact(
                f"gas m={m} lam={lam} frustration (closed form)",
                rep.degree,
                frustration_analytic("ising_gas", m=m, lam=lam),
            )
    for m in range(2, min(max_m, 5) + 1):
        rep = frustration_degree(M.model_ising("mg", m=m))
        yield _exact(f"mg m={m} frustration", rep.degree, Fraction(1, 2))


def ss_checks(max_m: int) -> Iterator[Check]:
    for n in (4, 8, 12):
        pairs = Pairing((2 * k, 2 * k + 1) for k in range(n // 2))
        r = ggm(M.ss_ground_state(pairs, n))
        yield Check(f"ss n={n} ggm", r.ggm == 0.0, r.ggm)
    for ly in (2, 4, 6):
        bonds, dimers = M.ss_lattice(2, ly)
        r = ggm(M.ss_ground_state(dimers, 2 * ly))
        yield Check(f"ss lattice 2x{ly} ggm", r.ggm == 0.0, r.ggm)


def rvb_checks(max_m: int, full: bool = False) -> Iterator[Check]:
    top = min(max_m, 5)
    values = [ggm(M.rvb_state(m)).ggm for m in range(1, top + 1)] if top >= 1 else []
    for m in range(2, top + 1):
        a, b = values[m - 2], values[m - 1]
        yield Check(f"rvb m={m - 1}->{m} increasing", b > a, b - a, f"{a:.12g} -> {b:.12g}")
    if full:
        g = ggm(M.rvb_state(8)).ggm
        yield _eq("rvb m=8 ggm vs 0.44", g, 0.44, RVB_TARGET_TOL)


def plaquette_checks(max_m: int) -> Iterator[Check]:
    layouts = [
        ("P=1 analogue", M.plaquette_chain(1), 0.25, False),
        ("1x2 chain (N=8)", M.plaquette_chain(2, 1), 0.1, False),
        ("2x2 square (N=16)", M.plaquette_square(2, 2), 0.045, False),
        ("1x6 chain (N=24)", M.plaquette_chain(6, 3), 0.0265, True),
    ]
    for label, layout, want, restricted in layouts:
        if layout.num_sites > 16 and max_m < 6:
            continue
        s = M.plaquette_state(layout)
        r = ggm(s, M.plaquette_cuts(layout)) if restricted else ggm(s)
        yield _eq(f"plaquette {label}", r.ggm, want, PLAQUETTE_TOL)


SCOPES: dict[str, Callable[..., Iterator[Check]]] = {
    "gas": gas_checks,
    "mg": mg_checks,
    "ring": ring_checks,
    "frustration": frustration_checks,
    "ss": ss_checks,
    "rvb": rvb_checks,
    "plaquette": plaquette_checks,
}


def run_checks(scope: str = "all", max_m: int = 4, rvb_full: bool = False) -> list[Check]:
    names = list(SCOPES) if scope == "all" else [scope]
    out: list[Check] = []
    for name in names:
        if name == "rvb":
            out.extend(rvb_checks(max_m, full=rvb_full))
        else:
            out.extend(SCOPES[name](max_m))
    return out
