"""Uniform staggered (MAC) grid for the 2D tank solver.

Layout, indexed [j, i] with y vertical (gravity acts along -y):

    p, alpha, T  cell centers   shape (ny, nx)
    u            vertical faces shape (ny, nx+1)
    v            horizontal faces shape (ny+1, nx)

The domain is treated as one metre deep, so "areas" of faces are simply
their lengths and volumes are cell areas.

Each side carries one boundary condition; individual faces on a side
can additionally be opened as pressure outlets (that is how a breach is
represented).  Walls and symmetry sides are both impermeable free-slip
boundaries in this solver: the tangential boundary layer is far below
desk-scale grid resolution, so no-slip walls would only pretend to add
physics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

WALL = "wall"
PRESSURE_OUTLET = "pressure_outlet"
SYMMETRY = "symmetry"

SIDES = ("left", "right", "bottom", "top")


@dataclass(frozen=True)
class BoundarySide:
    kind: str = WALL
    pressure: float = 0.0       # Pa, pressure_outlet only

    def __post_init__(self):
        if self.kind not in (WALL, PRESSURE_OUTLET, SYMMETRY):
            raise ValueError(f"unknown boundary kind {self.kind!r}")

    @property
    def open(self) -> bool:
        return self.kind == PRESSURE_OUTLET


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    dx: float                   # m
    dy: float                   # m
    origin: tuple[float, float] = (0.0, 0.0)
    left: BoundarySide = field(default_factory=BoundarySide)
    right: BoundarySide = field(default_factory=BoundarySide)
    bottom: BoundarySide = field(default_factory=BoundarySide)
    top: BoundarySide = field(default_factory=BoundarySide)

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError("grid needs nx, ny >= 4")
        if self.dx <= 0 or self.dy <= 0:
            raise ValueError("grid needs dx, dy > 0")

    @property
    def width(self) -> float:
        return self.nx * self.dx

    @property
    def height(self) -> float:
        return self.ny * self.dy

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy  # unit depth

    def y_centers(self):
        import numpy as np
        return self.origin[1] + (np.arange(self.ny) + 0.5) * self.dy

    def x_centers(self):
        import numpy as np
        return self.origin[0] + (np.arange(self.nx) + 0.5) * self.dx


@dataclass(frozen=True)
class BreachFaces:
    """Contiguous run of u-faces on a vertical wall opened as pressure
    outlets; this is how a hull breach enters the flow domain."""

    side: str                   # "left" | "right"
    j_lo: int                   # first open face row
    j_hi: int                   # one past the last open face row
    pressures: tuple[float, ...]  # Pa, one per open face, bottom to top

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("breach faces must sit on a vertical wall")
        if not self.j_lo < self.j_hi:
            raise ValueError("empty breach face range")
        if len(self.pressures) != self.j_hi - self.j_lo:
            raise ValueError("one outlet pressure per breach face required")

    @property
    def n_faces(self) -> int:
        return self.j_hi - self.j_lo
