import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings

from frustrant.errors import DomainError, ResourceCapError
from frustrant.ggm import (
    Bipartition,
    _power_top_eigenvalue,
    amplitude_matrix,
    dominant_partition_size_scan,
    dominant_size,
    enumerate_bipartitions,
    ggm,
    largest_eigenvalue_psd,
    max_schmidt_sq,
)
from frustrant.models import GasParams, ising_gas_state, rvb_state
from frustrant.state import Pairing, PureState, basis_state, normalize, singlet_product

from conftest import (
    apply_site_unitary,
    oracle_ggm,
    oracle_max_schmidt_sq,
    random_sparse_state,
    random_unitary,
    sparse_states,
)


def ghz(n):
    return PureState(n, [0, (1 << n) - 1], [1 / math.sqrt(2)] * 2)


def w_state(n):
    return PureState(n, [1 << k for k in range(n)], [1 / math.sqrt(n)] * n)


def test_enumerate_small():
    assert [c.part_a for c in enumerate_bipartitions(2)] == [(0,)]
    assert [c.part_a for c in enumerate_bipartitions(3)] == [(0,), (0, 1), (0, 2)]
    assert len(enumerate_bipartitions(4)) == 7
    with pytest.raises(DomainError):
        enumerate_bipartitions(1)


@pytest.mark.parametrize("n", range(2, 11))
def test_enumerate_count_and_uniqueness(n):
    cuts = enumerate_bipartitions(n)
    assert len(cuts) == 2 ** (n - 1) - 1
    assert len(set(cuts)) == len(cuts)
    assert all(0 in c.part_a for c in cuts)
    sizes = [len(c.part_a) for c in cuts]
    assert sizes == sorted(sizes)


def test_bipartition_canonical_form():
    assert Bipartition([1, 2], 4) == Bipartition([0, 3], 4)
    assert Bipartition([1, 2], 4).part_a == (0, 3)
    assert Bipartition([0, 1, 2], 4).size == 1
    for bad in ([], [0, 1, 2, 3], [5]):
        with pytest.raises(DomainError):
            Bipartition(bad, 4)


def test_ghz3_single_site():
    assert max_schmidt_sq(ghz(3), Bipartition([0], 3)) == pytest.approx(0.5, abs=1e-14)


def test_product_state_every_cut_is_one():
    s = basis_state(0b010, 3)
    for c in enumerate_bipartitions(3):
        assert max_schmidt_sq(s, c) == pytest.approx(1.0, abs=1e-14)
    r = ggm(basis_state(0b1010, 4))
    assert r.ggm == 0.0 and r.lambda_sq_max == pytest.approx(1.0)


def test_ghz4_every_cut_half():
    r = ggm(ghz(4), keep_per_partition=True)
    assert r.ggm == pytest.approx(0.5, abs=1e-14)
    assert all(v == pytest.approx(0.5, abs=1e-14) for v in r.per_partition.values())
    assert not r.restricted


def test_w3():
    assert ggm(w_state(3)).ggm == pytest.approx(1 / 3, abs=1e-14)


def test_ising_gas_m2_pair_cut():
    s = ising_gas_state(GasParams(2))
    assert max_schmidt_sq(s, Bipartition([0, 1], 4)) == pytest.approx(2 / 3, abs=1e-14)


def test_ising_gas_m3_size_scan():
    scan = dominant_partition_size_scan(ising_gas_state(GasParams(3)))
    assert scan[1] == pytest.approx(0.5, abs=1e-13)
    assert scan[2] == pytest.approx(0.6, abs=1e-13)
    assert dominant_size(scan) == 2


def test_dimer_product_reports_clean_zero():
    s = singlet_product(Pairing([(0, 3), (1, 2)]), 4)
    r = ggm(s)
    assert r.ggm == 0.0
    assert set(r.dominant.part_a) == {0, 3}


def test_first_maximum_wins_ties():
    r = ggm(ghz(4))
    assert r.dominant == Bipartition([0], 4)


def test_restricted_cuts_flagged():
    s = ghz(4)
    r = ggm(s, [Bipartition([0, 1], 4)])
    assert r.restricted
    with pytest.raises(DomainError):
        ggm(s, [])
    with pytest.raises(DomainError):
        ggm(s, [Bipartition([0], 3)])


def test_unnormalized_rejected():
    s = PureState(2, [0, 3], [1, 1])
    with pytest.raises(DomainError):
        ggm(s)
    with pytest.raises(DomainError):
        max_schmidt_sq(s, [0])


def test_site_cap():
    s = basis_state(0, 21)
    with pytest.raises(ResourceCapError):
        ggm(s)
    assert ggm(s, max_sites=21, cuts=[Bipartition([0], 21)]).ggm == 0.0


def test_amplitude_matrix_drops_empty_rows():
    mat = amplitude_matrix(ghz(3), [0])
    assert mat.shape == (2, 2)
    np.testing.assert_allclose(np.abs(mat), np.eye(2) / math.sqrt(2))


def test_oracle_self_check():
    # the dense oracle itself against hand values
    assert oracle_max_schmidt_sq(w_state(3).to_dense(), 3, (0,)) == pytest.approx(2 / 3)
    v = basis_state(0b01, 2).to_dense()
    assert oracle_max_schmidt_sq(v, 2, (0,)) == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(20))
def test_oracle_every_cut(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    s = random_sparse_state(rng, n)
    vec = s.to_dense()
    for c in enumerate_bipartitions(n):
        assert max_schmidt_sq(s, c) == pytest.approx(oracle_max_schmidt_sq(vec, n, c.part_a), abs=1e-10)


@settings(max_examples=80, deadline=None)
@given(sparse_states(2, 7))
def test_ggm_bounds(s):
    g = ggm(s).ggm
    assert 0.0 <= g <= 0.5 + 1e-12


@settings(max_examples=60, deadline=None)
@given(sparse_states(2, 7))
def test_complement_symmetry(s):
    n = s.num_sites
    for c in enumerate_bipartitions(n):
        assert max_schmidt_sq(s, c.part_a) == pytest.approx(max_schmidt_sq(s, c.part_b), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(sparse_states(2, 6))
def test_local_unitary_invariance(s):
    n = s.num_sites
    rng = np.random.default_rng(len(s) * 7919 + n)
    site = int(rng.integers(n))
    moved = PureState.from_dense(apply_site_unitary(s.to_dense(), n, site, random_unitary(rng)))
    for c in enumerate_bipartitions(n):
        assert max_schmidt_sq(moved, c) == pytest.approx(max_schmidt_sq(s, c), abs=1e-10)


def test_ising_gas_depends_only_on_cut_size():
    s = ising_gas_state(GasParams(3))
    by_size = {}
    for c in enumerate_bipartitions(6):
        by_size.setdefault(c.size, []).append(max_schmidt_sq(s, c))
    for vals in by_size.values():
        assert max(vals) - min(vals) < 1e-12


def test_power_iteration_against_eigvalsh():
    rng = np.random.default_rng(11)
    for dim in (65, 100, 257):
        x = rng.standard_normal((dim, 40)) + 1j * rng.standard_normal((dim, 40))
        gram = x @ x.conj().T
        gram /= np.trace(gram).real
        assert largest_eigenvalue_psd(gram) == pytest.approx(np.linalg.eigvalsh(gram)[-1], abs=1e-10)


def test_power_iteration_reports_nonconvergence():
    # degenerate top pair with opposite sign eigenvalues never converges for +-1
    op = np.diag([1.0, -1.0])
    assert _power_top_eigenvalue(op.dot, 2, max_iter=50, real=True) is None


def test_large_cut_uses_iterative_path_correctly():
    # 16 sites, 8:8 cut gives a 256-dimensional Gram matrix
    s = rvb_state(8)
    sites = list(range(4)) + list(range(8, 12))
    got = max_schmidt_sq(s, sites)
    mat = amplitude_matrix(s, sites)
    mat = mat.toarray() if hasattr(mat, "toarray") else mat
    want = np.linalg.svd(mat, compute_uv=False)[0] ** 2
    assert got == pytest.approx(want, abs=1e-10)


def test_threads_match_sequential(monkeypatch):
    s = random_sparse_state(np.random.default_rng(5), 9)
    seq = ggm(s, keep_per_partition=True, workers=1)
    par = ggm(s, keep_per_partition=True, workers=4)
    assert seq == par and seq.per_partition == par.per_partition
    monkeypatch.setenv("FRUSTRANT_THREADS", "3")
    assert ggm(s) == seq


def test_dense_oracle_full_ggm_small():
    for n in (3, 4, 5):
        s = normalize(PureState(n, list(range(1 << n)), np.arange(1, (1 << n) + 1)))
        assert ggm(s).ggm == pytest.approx(oracle_ggm(s.to_dense(), n), abs=1e-10)
