"""Counting and sampling graphs that are r-locally the integer lattice L^d.

Finite quotients Z^d / L of the lattice graph are r-locally L^d exactly when
the sublattice L has L1 minimum distance at least 2r + 2.  Disjoint unions
of such quotients form the model: this package enumerates the connected
pieces, counts and samples the unions, and compares the counts with
saddle-point asymptotics.
"""

from .asymptotics import (
    SaddleModel,
    c_constant,
    k_constant,
    k_constant_brigham,
    leading_term,
    saddle_estimate,
    zeta,
)
from .census import (
    CensusTable,
    build_census,
    count_invariant_lattices,
    count_small_distance_lattices,
    orbit_count_vs_cd,
    r_star,
)
from .counting import (
    BigCountTable,
    count_graphs,
    euler_transform_per_type,
    euler_transform_recurrence,
    find_power_partition,
    restricted_partition_count,
)
from .errors import (
    CensusRangeError,
    ConsistencyError,
    DegenerateLatticeError,
    EmptySupportError,
    LocographError,
    ParameterError,
    QuotientNotSimpleError,
    SaddleBracketError,
)
from .formats import VERSION as __version__
from .lattice import (
    OrbitClass,
    SignedPermutation,
    SublatticeHNF,
    enumerate_hnf,
    hnf_canonicalize,
    hyperoctahedral_group,
    is_invariant,
    min_distance,
    orbit_of,
    sublattice_count,
)
from .quotient import (
    LocalGraph,
    RootedBall,
    aut_lower_bound_log,
    ball,
    build_quotient,
    graph_isomorphic,
    is_r_locally_lattice,
    rooted_isomorphic,
)
from .sampler import (
    SampleReport,
    SampleSpec,
    batch_experiment,
    sample_graph,
    sample_restricted_partition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
