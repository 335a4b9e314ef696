"""Genuine multipartite entanglement (GGM) and frustration degree for frustrated spin models."""

from .cooling import (
    CoolingResult,
    GroundManifold,
    bloch_grid,
    build_manifold,
    cooled_state_classical,
    optimize_initial_ggm,
    project,
)
from .errors import (
    DegenerateDenominatorError,
    DomainError,
    FrustrantError,
    OrthogonalInitialError,
    ResourceCapError,
    ZeroNormError,
)
from .frustration import (
    FrustrationReport,
    GroundStateSet,
    IsingHamiltonian,
    SpinHamiltonian,
    classical_ground_states,
    frustration_analytic,
    frustration_degree,
    isingize,
    load_hamiltonian,
    parse_hamiltonian,
)
from .ggm import (
    Bipartition,
    GgmResult,
    dominant_partition_size_scan,
    enumerate_bipartitions,
    ggm,
    max_schmidt_sq,
)
from .state import (
    Pairing,
    PureState,
    SiteState,
    basis_state,
    dump_state,
    inner_product,
    load_state,
    normalize,
    product_state,
    singlet_product,
    superpose,
)

__version__ = "0.1.0"
