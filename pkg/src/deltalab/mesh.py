"""Cell-centered uniform grid on the unit square and its boundary-distance weight.

The computational domain is fixed to the unit square, |domain| = 1, discretized
by an n x n grid of cells of width h = 1/n.  Fields are sampled at cell centers,
where the distance to the boundary

    delta(x) = min(x1, 1 - x1, x2, 1 - x2)

is exact and bounded below by h/2.  Power-law weights delta**(-r) therefore
stay finite on every mesh, which is what makes the singular-absorption
experiments well defined at the discrete level.

Arrays are indexed ``values[ix, iy]`` with ``x = (ix + 0.5) h`` and
``y = (iy + 0.5) h``; the flat cell ordering is the C-order (row-major) ravel
of that layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

import numpy as np

__all__ = [
    "Mesh",
    "GridFunction",
    "BoundaryFace",
    "MeshMismatchError",
    "build_mesh",
    "integrate",
    "gradient",
    "gradient_magnitude",
]


class MeshMismatchError(ValueError):
    """Raised when an operation mixes fields from different meshes."""


class BoundaryFace(NamedTuple):
    """One cell face lying on the domain boundary."""

    ix: int
    iy: int
    side: str                  # "left" | "right" | "bottom" | "top"
    normal: tuple[float, float]


_SIDE_NORMALS = {
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
    "bottom": (0.0, -1.0),
    "top": (0.0, 1.0),
}


@dataclass(frozen=True, eq=False)
class Mesh:
    """Immutable cell-centered grid on the unit square.

    Attributes
    ----------
    n : int
        Cells per side; the total cell count is n**2.
    h : float
        Cell width, 1/n.
    cell_measure : float
        Area of one cell, h**2.
    xc, yc : ndarray, shape (n,)
        Center coordinates along each axis.
    delta : ndarray, shape (n, n)
        Distance from each cell center to the boundary; min over cells is h/2.
    boundary_faces : tuple of BoundaryFace
        The 4n faces on the boundary with their outward unit normals.
    """

    n: int
    h: float
    cell_measure: float
    xc: np.ndarray
    yc: np.ndarray
    delta: np.ndarray
    boundary_faces: tuple[BoundaryFace, ...]

    def __post_init__(self):
        self.xc.setflags(write=False)
        self.yc.setflags(write=False)
        self.delta.setflags(write=False)

    # Geometry is fully determined by n, so equality reduces to it.
    def __eq__(self, other):
        return isinstance(other, Mesh) and other.n == self.n

    def __hash__(self):
        return hash(("Mesh", self.n))

    @property
    def n_cells(self) -> int:
        return self.n * self.n

    @property
    def cell_centers(self) -> np.ndarray:
        """All cell centers as an (n**2, 2) array in flat (row-major) order."""
        X, Y = self.meshgrid()
        return np.column_stack([X.ravel(), Y.ravel()])

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xc, self.yc, indexing="ij")

    def interior_mask(self, min_delta: float) -> np.ndarray:
        """Boolean mask of cells with delta > min_delta."""
        return self.delta > min_delta


def build_mesh(n: int) -> Mesh:
    """Build the n x n cell-centered mesh on the unit square.

    Rejects n < 4: coarser grids cannot carry even one interior cell ring,
    so no boundary-layer quantity is meaningful on them.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"n must be an integer, got {type(n).__name__}")
    if n < 4:
        raise ValueError(f"mesh must have at least 4 cells per side, got n={n}")
    n = int(n)
    h = 1.0 / n
    xc = (np.arange(n) + 0.5) * h
    yc = xc.copy()
    X, Y = np.meshgrid(xc, yc, indexing="ij")
    delta = np.minimum.reduce([X, 1.0 - X, Y, 1.0 - Y])

    faces = []
    for iy in range(n):
        faces.append(BoundaryFace(0, iy, "left", _SIDE_NORMALS["left"]))
        faces.append(BoundaryFace(n - 1, iy, "right", _SIDE_NORMALS["right"]))
    for ix in range(n):
        faces.append(BoundaryFace(ix, 0, "bottom", _SIDE_NORMALS["bottom"]))
        faces.append(BoundaryFace(ix, n - 1, "top", _SIDE_NORMALS["top"]))

    return Mesh(
        n=n,
        h=h,
        cell_measure=h * h,
        xc=xc,
        yc=yc,
        delta=delta,
        boundary_faces=tuple(faces),
    )


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Scalar field sampled at the cell centers of a mesh."""

    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.mesh.n, self.mesh.n):
            raise ValueError(
                f"values shape {values.shape} does not match mesh "
                f"({self.mesh.n}, {self.mesh.n})"
            )
        object.__setattr__(self, "values", values)
        self.values.setflags(write=False)

    @classmethod
    def constant(cls, mesh: Mesh, value: float) -> "GridFunction":
        return cls(mesh, np.full((mesh.n, mesh.n), float(value)))

    @classmethod
    def sample(cls, mesh: Mesh, f: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "GridFunction":
        """Sample a callable f(x, y) at the cell centers."""
        X, Y = mesh.meshgrid()
        return cls(mesh, np.broadcast_to(np.asarray(f(X, Y), dtype=float), X.shape).copy())

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.mesh, np.array(values, dtype=float))

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, GridFunction):
            if other.mesh != self.mesh:
                raise MeshMismatchError("operands are defined on different meshes")
            return other.values
        return np.asarray(other, dtype=float)

    def __add__(self, other):
        return GridFunction(self.mesh, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFunction(self.mesh, self.values - self._coerce(other))

    def __rsub__(self, other):
        return GridFunction(self.mesh, self._coerce(other) - self.values)

    def __mul__(self, other):
        return GridFunction(self.mesh, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return GridFunction(self.mesh, self.values / self._coerce(other))

    def __pow__(self, exponent):
        return GridFunction(self.mesh, self.values ** float(exponent))

    def __neg__(self):
        return GridFunction(self.mesh, -self.values)

    def __abs__(self):
        return GridFunction(self.mesh, np.abs(self.values))


WeightLike = Union[GridFunction, np.ndarray, None]


def _weight_values(u: GridFunction, weight: WeightLike) -> np.ndarray | None:
    if weight is None:
        return None
    if isinstance(weight, GridFunction):
        if weight.mesh != u.mesh:
            raise MeshMismatchError("weight is defined on a different mesh")
        return weight.values
    w = np.asarray(weight, dtype=float)
    if w.shape != u.values.shape:
        raise MeshMismatchError(f"weight shape {w.shape} does not match field shape {u.values.shape}")
    return w


def integrate(u: GridFunction, weight: WeightLike = None) -> float:
    """Midpoint quadrature of u (optionally against a weight) over the domain.

    Returns sum_c u(c) * weight(c) * h**2; exact for cellwise-constant
    integrands.  The weight defaults to 1.
    """
    w = _weight_values(u, weight)
    if w is None:
        return float(u.values.sum() * u.mesh.cell_measure)
    return float((u.values * w).sum() * u.mesh.cell_measure)


def gradient(u: GridFunction) -> tuple[np.ndarray, np.ndarray]:
    """Discrete gradient: central differences inside, one-sided on the edge rings."""
    gx, gy = np.gradient(u.values, u.mesh.h, edge_order=1)
    return gx, gy


def gradient_magnitude(u: GridFunction) -> GridFunction:
    gx, gy = gradient(u)
    return GridFunction(u.mesh, np.hypot(gx, gy))
