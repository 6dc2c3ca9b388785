"""Central configurations of a regular N-gon with a body at its center.

Planar points are complex numbers and G = 1.
"""

from .central_config import (
    Branch,
    MassSolution,
    ResidualReport,
    cc_residual,
    solve_masses_circulant,
    solve_masses_newton,
    theorem_configuration,
    theorem_masses,
    verify_theorem_forward,
)
from .circulant import (
    CirculantMatrix,
    SpectralDecomposition,
    build_A,
    decompose,
    eigenvalue,
    eigenvalue_vanishing_check,
    eigenvector,
)
from .errors import (
    BracketError,
    CoincidentPositionsError,
    ConvergenceError,
    DomainError,
    InfeasibleError,
    SingularityError,
)
from .euler_collinear import EulerProblem, euler_residual, midpoint_residual, solve_Q
from .geometry import (
    Configuration,
    ConfigurationMetrics,
    mass_center,
    metrics,
    polygon_plus_center_configuration,
    regular_polygon_vertices,
)
from .identities import IdentityReport, csc_sum, verify_cosecant_identity, verify_pair_identity

__version__ = "0.1.0"
