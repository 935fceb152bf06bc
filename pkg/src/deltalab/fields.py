"""Problem data: singular potentials, divergence-free velocities, cutoffs.

Potentials are powers of the boundary distance, c * delta**(-r), evaluated at
cell centers (where delta >= h/2, so the values are finite on every mesh and
grow deliberately under refinement).  Velocities always come from a stream
function with vanishing boundary trace,

    u = (d psi / dy, -d psi / dx),

computed by central differences on an odd-reflected extension of psi through
the walls.  Odd reflection encodes the zero trace; with it the two centered
differences commute exactly, so the discrete divergence vanishes identically
and the interpolated wall-normal velocity is exactly zero.  This makes
div u = 0 and u.n = 0 structural properties rather than approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .mesh import GridFunction, Mesh, MeshMismatchError, integrate
from .rearrange import NormSpec, norm

__all__ = [
    "PotentialSpec",
    "VectorField",
    "Cutoff",
    "FieldReport",
    "DataSpec",
    "StreamSpec",
    "make_potential",
    "truncate_potential",
    "velocity_from_stream",
    "zero_velocity",
    "make_cutoff",
    "check_field",
    "make_data",
    "make_stream",
    "make_velocity",
]


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PotentialSpec:
    """Absorption potential: c * delta**(-r), a constant, or zero."""

    kind: str  # "power" | "bounded" | "zero"
    c: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if self.kind not in ("power", "bounded", "zero"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.c < 0:
            raise ValueError("potential coefficient must be nonnegative")
        if self.r < 0:
            raise ValueError("potential exponent must be nonnegative")

    @classmethod
    def power(cls, c: float, r: float) -> "PotentialSpec":
        return cls("power", c=float(c), r=float(r))

    @classmethod
    def bounded(cls, c: float) -> "PotentialSpec":
        return cls("bounded", c=float(c))

    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls("zero")


def make_potential(mesh: Mesh, spec: PotentialSpec) -> GridFunction:
    if spec.kind == "zero":
        return GridFunction.constant(mesh, 0.0)
    if spec.kind == "bounded":
        return GridFunction.constant(mesh, spec.c)
    return GridFunction(mesh, spec.c * mesh.delta ** (-spec.r))


def truncate_potential(V: GridFunction, k: float) -> GridFunction:
    """Pointwise min(V, k); the bounded-approximation ladder rung."""
    if not k > 0:
        raise ValueError(f"truncation level must be positive, got {k}")
    return GridFunction(V.mesh, np.minimum(V.values, k))


# ---------------------------------------------------------------------------
# stream functions and velocities
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VectorField:
    """Two-component velocity derived from a stream function."""

    mesh: Mesh
    ux: np.ndarray
    uy: np.ndarray
    stream: GridFunction

    def __post_init__(self):
        self.ux.setflags(write=False)
        self.uy.setflags(write=False)

    def magnitude(self) -> GridFunction:
        return GridFunction(self.mesh, np.hypot(self.ux, self.uy))

    def is_zero(self) -> bool:
        return not (self.ux.any() or self.uy.any())

    def scaled(self, factor: float) -> "VectorField":
        return velocity_from_stream(self.stream * factor)


def _extend_odd(psi: np.ndarray, layers: int) -> np.ndarray:
    """Extend by odd reflection through each wall (zero boundary trace)."""
    ext = psi
    for _ in range(layers):
        ext = np.pad(ext, 1)
        ext[0, :] = -ext[1, :]
        ext[-1, :] = -ext[-2, :]
        ext[:, 0] = -ext[:, 1]
        ext[:, -1] = -ext[:, -2]
    return ext


def velocity_from_stream(psi: GridFunction) -> VectorField:
    """Velocity (d psi/dy, -d psi/dx) by central differences.

    The stream function must have vanishing boundary trace; its samples in
    the boundary cells may be nonzero but must be small enough to be
    consistent with a function that is zero on the wall half a cell away.
    """
    mesh = psi.mesh
    h = mesh.h
    p = psi.values

    ring = np.concatenate([p[0, :], p[-1, :], p[:, 0], p[:, -1]])
    gx, gy = np.gradient(p, h, edge_order=1)
    slope = float(np.hypot(gx, gy).max())
    if np.abs(ring).max() > 1e-12 + 2.0 * h * slope:
        raise ValueError(
            "stream function does not vanish on the boundary: values in the "
            "boundary cells are too large for a zero boundary trace"
        )

    ext = _extend_odd(p, 1)
    ux = (ext[1:-1, 2:] - ext[1:-1, :-2]) / (2.0 * h)
    uy = -(ext[2:, 1:-1] - ext[:-2, 1:-1]) / (2.0 * h)
    return VectorField(mesh=mesh, ux=ux, uy=uy, stream=psi)


def zero_velocity(mesh: Mesh) -> VectorField:
    return velocity_from_stream(GridFunction.constant(mesh, 0.0))


@dataclass(frozen=True)
class FieldReport:
    """Quality gate for a velocity field used as experiment input."""

    max_div: float
    max_un: float
    lorentz_N1_norm: float
    l2p5_norm: float


def check_field(u: VectorField) -> FieldReport:
    """Report discrete divergence, wall-normal trace, and integrability norms.

    The divergence is evaluated with the same odd-extension convention used
    to build the field, under which it vanishes identically; max_div records
    the rounding floor actually achieved.  The normal trace is interpolated
    onto each wall face and is zero by construction.  Both the L^(2,1) norm
    and the plain L^2.5 norm of |u| are reported, the two integrability
    scales under which such fields are used.
    """
    mesh = u.mesh
    h = mesh.h
    ext = _extend_odd(u.stream.values, 2)
    ux = (ext[1:-1, 2:] - ext[1:-1, :-2]) / (2.0 * h)
    uy = -(ext[2:, 1:-1] - ext[:-2, 1:-1]) / (2.0 * h)
    div = (ux[2:, 1:-1] - ux[:-2, 1:-1]) / (2.0 * h) + (uy[1:-1, 2:] - uy[1:-1, :-2]) / (2.0 * h)
    max_div = float(np.abs(div).max())

    # Interpolated normal velocity on each wall: mean of the boundary-cell
    # value and its ghost, which odd reflection makes exact negatives.
    un_left = 0.5 * (ux[1, 1:-1] + ux[0, 1:-1])
    un_right = 0.5 * (ux[-2, 1:-1] + ux[-1, 1:-1])
    un_bottom = 0.5 * (uy[1:-1, 1] + uy[1:-1, 0])
    un_top = 0.5 * (uy[1:-1, -2] + uy[1:-1, -1])
    max_un = float(max(np.abs(w).max() for w in (un_left, un_right, un_bottom, un_top)))

    mag = u.magnitude()
    return FieldReport(
        max_div=max_div,
        max_un=max_un,
        lorentz_N1_norm=norm(mag, NormSpec.lorentz(2, 1)),
        l2p5_norm=norm(mag, NormSpec.lorentz(2.5, 2.5)),
    )


# ---------------------------------------------------------------------------
# boundary cutoffs
# ---------------------------------------------------------------------------

def _smoothstep(sigma: np.ndarray) -> np.ndarray:
    s = np.clip(sigma, 0.0, 1.0)
    return 3.0 * s**2 - 2.0 * s**3


@dataclass(frozen=True)
class Cutoff:
    """Smooth indicator of the interior: 1 where delta > eps, 0 where delta < eps/2."""

    eps: float
    values: GridFunction


def make_cutoff(mesh: Mesh, eps: float) -> Cutoff:
    """Cutoff h((2 delta - eps)/eps) with the cubic smoothstep profile."""
    if eps <= 2.0 * mesh.h:
        raise ValueError(f"eps={eps} too small for mesh h={mesh.h}; need eps > 2h")
    if eps >= 0.5:
        raise ValueError(f"eps={eps} must be below 1/2")
    sigma = (2.0 * mesh.delta - eps) / eps
    return Cutoff(eps=eps, values=GridFunction(mesh, _smoothstep(sigma)))


# ---------------------------------------------------------------------------
# named data and stream families (shared by experiments and the CLI)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DataSpec:
    """Right-hand-side family for solver and experiment runs.

    kinds:
      constant        value
      sine            amplitude * sin(pi x) sin(pi y)
      sine2           amplitude * sin(2 pi x) sin(pi y)  (sign-changing)
      bump            amplitude * delta^delta_exponent * B(r/width), centered
                      at (cx, cy); B is the biweight (1 - t^2)_+^2
      boundary_bump   bump at (0.5, distance) with width = distance/2
      indicator       1 on [x0, x1] x [y0, y1]
      dipole          opposite-mass bump pair on the diagonal, total mass
                      +/- amplitude each, separated by distance
    """

    kind: str
    value: float = 1.0
    amplitude: float = 1.0
    cx: float = 0.5
    cy: float = 0.5
    width: float = 0.1
    distance: float = 0.125
    delta_exponent: float = 0.0
    box: tuple[float, float, float, float] = (0.0, 0.5, 0.0, 0.5)

    _KINDS = ("constant", "sine", "sine2", "bump", "boundary_bump", "indicator", "dipole")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown data kind {self.kind!r}")


def make_data(mesh: Mesh, spec: DataSpec) -> GridFunction:
    X, Y = mesh.meshgrid()
    if spec.kind == "constant":
        return GridFunction.constant(mesh, spec.value)
    if spec.kind == "sine":
        return GridFunction(mesh, spec.amplitude * np.sin(np.pi * X) * np.sin(np.pi * Y))
    if spec.kind == "sine2":
        return GridFunction(mesh, spec.amplitude * np.sin(2 * np.pi * X) * np.sin(np.pi * Y))
    if spec.kind == "indicator":
        x0, x1, y0, y1 = spec.box
        inside = (X >= x0) & (X <= x1) & (Y >= y0) & (Y <= y1)
        return GridFunction(mesh, inside.astype(float))
    if spec.kind == "dipole":
        half = spec.distance / 2.0
        pos = make_data(mesh, DataSpec("bump", cx=0.5 - half, cy=0.5 - half, width=spec.width))
        neg = make_data(mesh, DataSpec("bump", cx=0.5 + half, cy=0.5 + half, width=spec.width))
        return pos * (spec.amplitude / integrate(pos)) - neg * (spec.amplitude / integrate(neg))
    if spec.kind == "boundary_bump":
        spec = DataSpec(
            "bump", amplitude=spec.amplitude, cx=0.5, cy=spec.distance,
            width=spec.distance / 2.0, delta_exponent=spec.delta_exponent,
        )
    r2 = ((X - spec.cx) ** 2 + (Y - spec.cy) ** 2) / spec.width**2
    bump = np.where(r2 < 1.0, (1.0 - r2) ** 2, 0.0)
    vals = spec.amplitude * bump
    if spec.delta_exponent != 0.0:
        vals = vals * mesh.delta**spec.delta_exponent
    return GridFunction(mesh, vals)


@dataclass(frozen=True)
class StreamSpec:
    """Stream-function family: "zero", "poly" (x(1-x)y(1-y)) or "sine"."""

    kind: str
    amplitude: float = 1.0

    def __post_init__(self):
        if self.kind not in ("zero", "poly", "sine"):
            raise ValueError(f"unknown stream kind {self.kind!r}")


def make_stream(mesh: Mesh, spec: StreamSpec) -> GridFunction:
    X, Y = mesh.meshgrid()
    if spec.kind == "zero":
        return GridFunction.constant(mesh, 0.0)
    if spec.kind == "poly":
        return GridFunction(mesh, spec.amplitude * X * (1 - X) * Y * (1 - Y))
    return GridFunction(mesh, spec.amplitude * np.sin(np.pi * X) * np.sin(np.pi * Y))


def make_velocity(mesh: Mesh, spec: StreamSpec) -> VectorField:
    return velocity_from_stream(make_stream(mesh, spec))
