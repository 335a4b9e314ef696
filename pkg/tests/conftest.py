"""Shared dense oracles and hypothesis strategies.

The oracles work on full 2**n vectors with numpy reshapes and never touch the
sparse code paths under test.
"""

import itertools

import numpy as np
from hypothesis import strategies as st

from frustrant.state import PureState


def dense_tensor(vec, n):
    """Reshape so that axis ``k`` is site ``k`` (site 0 is the least significant bit)."""
    return np.asarray(vec).reshape((2,) * n).transpose(tuple(range(n - 1, -1, -1)))


def oracle_rdm(vec, n, sites_a):
    t = dense_tensor(vec, n)
    rest = [k for k in range(n) if k not in sites_a]
    mat = t.transpose(list(sites_a) + rest).reshape(2 ** len(sites_a), -1)
    return mat @ mat.conj().T


def oracle_max_schmidt_sq(vec, n, sites_a):
    return float(np.linalg.eigvalsh(oracle_rdm(vec, n, sites_a))[-1])


def oracle_ggm(vec, n):
    best = 0.0
    for k in range(1, n // 2 + 1):
        for a in itertools.combinations(range(n), k):
            best = max(best, oracle_max_schmidt_sq(vec, n, a))
    return 1.0 - best


def random_sparse_state(rng, n, support=None, real=False):
    dim = 1 << n
    support = support or int(rng.integers(1, dim + 1))
    idx = rng.choice(dim, size=support, replace=False)
    amp = rng.standard_normal(support)
    if not real:
        amp = amp + 1j * rng.standard_normal(support)
    amp = amp / np.linalg.norm(amp)
    return PureState(n, idx, amp)


def random_unitary(rng, d=2):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def apply_site_unitary(vec, n, site, u):
    t = dense_tensor(vec, n)
    t = np.moveaxis(np.tensordot(u, t, axes=([1], [site])), 0, site)
    return t.transpose(tuple(range(n - 1, -1, -1))).reshape(-1)


@st.composite
def sparse_states(draw, min_sites=2, max_sites=6):
    n = draw(st.integers(min_sites, max_sites))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    support = draw(st.integers(1, 1 << n))
    return random_sparse_state(rng, n, support, real=draw(st.booleans()))


# acceptance results, filled by tests/test_acceptance.py
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
