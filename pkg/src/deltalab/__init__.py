"""deltalab: a desk-scale laboratory for convection-diffusion equations with
boundary-singular absorption and divergence-free flow on the unit square.

The package builds the discrete machinery (meshes, rearrangement profiles,
Lorentz-type norms, singular potentials, stream-function velocities, hybrid
upwind solvers) and a set of estimate experiments that measure the constants
in the a priori bounds these problems satisfy.
"""

from .mesh import (
    BoundaryFace,
    GridFunction,
    Mesh,
    MeshMismatchError,
    build_mesh,
    gradient,
    gradient_magnitude,
    integrate,
)
from .rearrange import (
    ALPHA_N,
    N,
    N_PRIME,
    NormSpec,
    PSRReport,
    RearrangedProfile,
    check_psr,
    decreasing_rearrangement,
    distribution_function,
    double_star,
    norm,
    relative_rearrangement,
)

__all__ = [
    "BoundaryFace",
    "GridFunction",
    "Mesh",
    "MeshMismatchError",
    "build_mesh",
    "gradient",
    "gradient_magnitude",
    "integrate",
    "ALPHA_N",
    "N",
    "N_PRIME",
    "NormSpec",
    "PSRReport",
    "RearrangedProfile",
    "check_psr",
    "decreasing_rearrangement",
    "distribution_function",
    "double_star",
    "norm",
    "relative_rearrangement",
]

__version__ = "0.1.0"
