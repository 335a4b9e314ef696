import math

import numpy as np
import pytest

from frustrant import models as M
from frustrant.cooling import (
    bloch_grid,
    build_manifold,
    cooled_state_classical,
    optimize_initial_ggm,
    product_amplitudes,
    project,
)
from frustrant.errors import DomainError, OrthogonalInitialError
from frustrant.frustration import ring_ising
from frustrant.ggm import ggm
from frustrant.state import PureState, SiteState, basis_state, inner_product, product_state, singlet_product, Pairing


def test_manifold_orthonormal():
    states = [basis_state(0, 2), PureState(2, [0, 3], [1, 1]), basis_state(3, 2)]
    man = build_manifold(states)
    assert man.dimension == 2
    gram = np.array([[inner_product(a, b) for b in man.orthonormal_basis] for a in man.orthonormal_basis])
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-12)


def test_rvb_coverings_overcomplete():
    # 2 black + 2 white sites: the 2 coverings span 2 dims; adding the third
    # matching (black-black) stays inside the 2-dim singlet sector
    covers = M.rvb_coverings(2) + [singlet_product(Pairing([(0, 1), (2, 3)]), 4)]
    man = build_manifold(covers)
    assert man.dimension == 2 < len(covers)


def test_manifold_errors():
    with pytest.raises(DomainError):
        build_manifold([])
    with pytest.raises(DomainError):
        build_manifold([basis_state(0, 2), basis_state(0, 3)])


def test_product_amplitudes_match_product_state():
    rng = np.random.default_rng(0)
    sites = []
    for _ in range(3):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        sites.append(SiteState(*(v / np.linalg.norm(v))))
    dense = product_state(sites).to_dense()
    np.testing.assert_allclose(product_amplitudes(np.arange(8), sites), dense, atol=1e-15)


def test_projection_and_projector_agree():
    man = build_manifold(list(M.mg_ground_states(2)))
    init = [SiteState.bloch(0.3 * k + 0.2, 0.7 * k) for k in range(4)]
    res = project(man, init)
    direct = man.apply_projector(product_state(init))
    assert res.overlap_norm == pytest.approx(direct.norm(), abs=1e-12)
    assert abs(inner_product(res.cooled, direct)) == pytest.approx(direct.norm(), abs=1e-12)
    assert res.cooled.is_normalized()


def test_orthogonal_initial_raises():
    man = build_manifold([basis_state(0b11, 2)])
    with pytest.raises(OrthogonalInitialError):
        project(man, [SiteState(1, 0), SiteState(1, 0)])


def test_identical_sites_orthogonal_to_singlets():
    man = build_manifold(list(M.mg_ground_states(2)))
    with pytest.raises(OrthogonalInitialError):
        project(man, [SiteState.plus()] * 4)


def test_gas_cooling_independent_of_initial():
    hi = M.model_ising("ising_gas", m=2)
    want = M.ising_gas_state(M.GasParams(2))
    for theta, phi in [(0.4, 0.0), (1.1, 2.0), (2.5, -0.7)]:
        res = cooled_state_classical(hi, [SiteState.bloch(theta, phi)] * 4)
        assert abs(inner_product(res.cooled, want)) == pytest.approx(1.0, abs=1e-12)


def test_triangle_cooled_is_uniform_over_ground():
    res = cooled_state_classical(ring_ising(3, [1, 1, 1]), [SiteState.plus()] * 3)
    assert len(res.cooled) == 6
    np.testing.assert_allclose(np.abs(res.cooled.amps) ** 2, 1 / 6)


def test_ring_cooled_state_uniform():
    s = M.ising_ring_cooled_state(3)
    assert len(s) == 12
    np.testing.assert_allclose(np.abs(s.amps), 1 / math.sqrt(12))


def test_bloch_grid():
    g = bloch_grid(4)
    assert len(g) == 5 * 4
    assert g[0] == SiteState.bloch(0, 0)
    with pytest.raises(DomainError):
        bloch_grid(0)


def test_optimize_mg_sublattices_reaches_alpha_one():
    # even/odd sublattice classes; the alpha=1 state is the known optimum
    man = build_manifold(list(M.mg_ground_states(2)))
    res, g = optimize_initial_ggm(man, steps=8, site_classes=[0, 1, 0, 1])
    best = ggm(M.mg_cooled_state(M.MgParams(2, 1.0))).ggm
    assert g.ggm == pytest.approx(best, abs=1e-10)
    assert res.cooled.is_normalized()


def test_optimize_all_orthogonal_raises():
    man = build_manifold(list(M.mg_ground_states(2)))
    with pytest.raises(OrthogonalInitialError):
        optimize_initial_ggm(man, steps=3)


def test_optimize_is_deterministic():
    man = build_manifold([basis_state(0b011, 3), basis_state(0b101, 3), basis_state(0b110, 3)])
    a = optimize_initial_ggm(man, steps=6)
    b = optimize_initial_ggm(man, steps=6)
    assert a[1] == b[1]
    assert a[0].initial == b[0].initial
    assert a[1].ggm == pytest.approx(1 / 3, abs=1e-12)


def test_projection_idempotent():
    man = build_manifold(list(M.mg_ground_states(3)))
    init = [SiteState.bloch(0.4 + 0.3 * k, 1.3 * k) for k in range(6)]
    cooled = project(man, init).cooled
    again = man.apply_projector(cooled)
    assert abs(inner_product(again, cooled)) == pytest.approx(1.0, abs=1e-10)
    assert again.norm() == pytest.approx(1.0, abs=1e-10)


def test_overlap_norm_is_projector_expectation():
    man = build_manifold(M.rvb_coverings(3))
    init = [SiteState.bloch(0.2 + 0.5 * k, 0.9 * k) for k in range(6)]
    res = project(man, init)
    direct = sum(abs(inner_product(g, product_state(init))) ** 2 for g in man.orthonormal_basis)
    assert res.overlap_norm**2 == pytest.approx(direct, abs=1e-10)


def test_cooled_state_basis_independent():
    covers = M.rvb_coverings(3)
    init = [SiteState.bloch(0.3 + 0.4 * k, 0.5 * k) for k in range(6)]
    a = project(build_manifold(covers), init).cooled
    b = project(build_manifold(covers[::-1]), init).cooled
    assert abs(inner_product(a, b)) == pytest.approx(1.0, abs=1e-10)


def test_grid_on_ghz_span_reaches_half():
    man = build_manifold([basis_state(0, 2), basis_state(3, 2)])
    res, g = optimize_initial_ggm(man, steps=8, site_classes=[0, 1])
    assert g.ggm == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(np.abs(res.cooled.amps), [1 / math.sqrt(2)] * 2, atol=1e-12)


def test_mg_grid_bounded_by_alpha_optimum():
    man = build_manifold(list(M.mg_ground_states(3)))
    _, g = optimize_initial_ggm(man, steps=6, site_classes=[0, 1] * 3)
    assert g.ggm <= float(M.mg_ggm_analytic(3)) + 1e-10
