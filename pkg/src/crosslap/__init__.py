"""crosslap: cross-homology and cross-Laplacian spectra for two-layer
simplicial structures and multiplex networks.

The package models crossimplicial bicomplexes (two vertex layers joined
by mixed simplices), computes their cross-Betti vectors by rank-nullity
and by Laplacian kernels, and analyses the spectra of the weighted
cross-Laplacians to detect and rank the nodes of one layer that
restructure the topology of the other (spectral cross-hubs), including
the diffusion pipeline for multiplex networks.
"""

from . import errors
from .core import (
    BOTTOM,
    TOP,
    Bicomplex,
    Crossimplex,
    Multicomplex,
    Weighting,
    adjacency,
    close,
    cross_clique_bicomplex,
    crossfaces,
    degrees,
    make_crossimplex,
    skeleton,
    transpose,
    validate,
)
from .diffusion import (
    DiffusionReport,
    Multiplex,
    diffusion_bicomplex,
    diffusion_hub_analysis,
)
from .homology import (
    BettiVector,
    ChainBasis,
    Cone,
    Kite,
    SignedSparseMatrix,
    betti_vector,
    boundary_matrix,
    chain_basis,
    cross_betti_table,
    enumerate_cones,
    enumerate_kites,
)
from .spectral import (
    EigenDecomposition,
    Laplacian,
    PersistenceBars,
    SpectralReport,
    Stage,
    coboundary_matrix,
    edge_intensities,
    eig,
    harmonic_cross_hubs,
    laplacian,
    laplacian_from_boundaries,
    persistence_bars,
    principal_cross_hubs,
    spectral_cross_hubs,
    spectral_report,
    stage_partition,
)

__version__ = "0.1.0"

__all__ = [
    "BOTTOM",
    "TOP",
    "Bicomplex",
    "BettiVector",
    "ChainBasis",
    "Cone",
    "Crossimplex",
    "DiffusionReport",
    "EigenDecomposition",
    "Kite",
    "Laplacian",
    "Multicomplex",
    "Multiplex",
    "PersistenceBars",
    "SignedSparseMatrix",
    "SpectralReport",
    "Stage",
    "Weighting",
    "adjacency",
    "betti_vector",
    "boundary_matrix",
    "chain_basis",
    "close",
    "coboundary_matrix",
    "cross_betti_table",
    "cross_clique_bicomplex",
    "crossfaces",
    "degrees",
    "diffusion_bicomplex",
    "diffusion_hub_analysis",
    "edge_intensities",
    "eig",
    "enumerate_cones",
    "enumerate_kites",
    "errors",
    "harmonic_cross_hubs",
    "laplacian",
    "laplacian_from_boundaries",
    "make_crossimplex",
    "persistence_bars",
    "principal_cross_hubs",
    "skeleton",
    "spectral_cross_hubs",
    "spectral_report",
    "stage_partition",
    "transpose",
    "validate",
]
