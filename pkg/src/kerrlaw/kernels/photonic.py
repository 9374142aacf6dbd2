"""Photonic-cavity kernel: field grids, overlap integrals, V_eff, E4 and eta.

Field grids are real magnitude profiles |f(r)| on a regular raster. All
integrals are midpoint sums (cell value times cell volume). The mode
volume uses the peak-normalized convention V_eff = 1 / max|f|^2 on a unit
normalized profile, which is the geometric volume for a uniform field.

Grid text format::

    nx ny nz
    dx dy dz          # meters
    v0 v1 v2 ...      # nx*ny*nz amplitudes, x fastest, any line breaks

Anything after ``#`` on a line is ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import constants

from kerrlaw.core import EnergyScale, ProjectionFactor
from kerrlaw.errors import DeviceFileError, DomainError

EPS0 = constants.epsilon_0
C_LIGHT = constants.c
HBAR = constants.hbar
H_PLANCK = constants.h


@dataclass(frozen=True)
class FieldGrid:
    """Mode-profile magnitude on a regular grid.

    ``amplitude`` has shape (nx, ny, nz).
    """

    amplitude: np.ndarray
    dx: float
    dy: float
    dz: float

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=float)
        if amp.ndim != 3:
            raise DomainError(f"field grid must be 3-D, got shape {amp.shape}")
        if min(amp.shape) < 1:
            raise DomainError("field grid needs at least one cell per axis")
        if not (self.dx > 0 and self.dy > 0 and self.dz > 0):
            raise DomainError("grid spacings must be > 0")
        if not np.all(np.isfinite(amp)):
            raise DomainError("field grid contains non-finite values")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitude", amp)

    @property
    def shape(self):
        return self.amplitude.shape

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy * self.dz

    def norm(self) -> float:
        return float(np.sum(self.amplitude**2) * self.cell_volume)

    @classmethod
    def from_function(cls, func, n, extent):
        """Sample ``func(x, y, z)`` at cell centers of a box.

        ``n`` is (nx, ny, nz) and ``extent`` ((x0, x1), (y0, y1), (z0, z1)).
        """
        axes = []
        steps = []
        for count, (a, b) in zip(n, extent):
            h = (b - a) / count
            axes.append(a + h * (np.arange(count) + 0.5))
            steps.append(h)
        X, Y, Z = np.meshgrid(*axes, indexing="ij")
        return cls(np.abs(func(X, Y, Z)), *steps)


@dataclass(frozen=True)
class PhotonicSpec:
    wavelength: float
    n0: float
    chi3: float
    V_eff: float
    Gamma0: Optional[float] = None

    def __post_init__(self):
        for name in ("wavelength", "n0", "chi3", "V_eff"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0")
        if self.Gamma0 is not None and not self.Gamma0 > 0:
            raise DomainError("Gamma0 must be > 0")

    @property
    def reference_overlap(self) -> float:
        # default reference overlap is that of a uniform mode filling V_eff
        return self.Gamma0 if self.Gamma0 is not None else 1.0 / self.V_eff

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * C_LIGHT / self.wavelength


def normalize_grid(g: FieldGrid) -> FieldGrid:
    total = g.norm()
    if total <= 0:
        raise DomainError("cannot normalize an all-zero field")
    return FieldGrid(g.amplitude / math.sqrt(total), g.dx, g.dy, g.dz)


def _same_geometry(a: FieldGrid, b: FieldGrid):
    if a.shape != b.shape or not np.allclose((a.dx, a.dy, a.dz), (b.dx, b.dy, b.dz), rtol=1e-12, atol=0):
        raise DomainError(
            f"grid geometry mismatch: {a.shape} @ {(a.dx, a.dy, a.dz)} vs {b.shape} @ {(b.dx, b.dy, b.dz)}"
        )


def overlap_integral(a: FieldGrid, b: FieldGrid) -> float:
    """Midpoint sum of |f_A|^2 |f_B|^2 dV, in m^-3 for normalized grids."""
    _same_geometry(a, b)
    # elementwise product is symmetric, so the sum is exactly symmetric in (a, b)
    return float(np.sum(a.amplitude**2 * b.amplitude**2) * a.cell_volume)


def mode_volume(g: FieldGrid) -> float:
    peak = float(np.max(g.amplitude**2))
    if peak <= 0:
        raise DomainError("mode volume is undefined for a zero field")
    return 1.0 / peak


def eta_photonic(spec: PhotonicSpec, overlap: float, rel_unc: float = 0.0) -> ProjectionFactor:
    value = (spec.wavelength**3 / spec.V_eff) * (overlap / spec.reference_overlap)
    return ProjectionFactor(value, rel_unc, "photonic")


def e4_photonic(spec: PhotonicSpec, omega: Optional[float] = None, rel_unc: float = 0.0) -> EnergyScale:
    """Quartic energy of a photon pair, returned as E4/h in Hz.

    ``omega`` is the angular frequency in rad/s; defaults to 2 pi c / lambda.
    """
    w = spec.omega if omega is None else omega
    energy = 3.0 * HBAR * w**2 * spec.chi3 / (4.0 * EPS0**2 * spec.n0**4 * spec.V_eff)
    return EnergyScale(energy / H_PLANCK, rel_unc)


def chi3_from_n2(n2: float, n0: float) -> float:
    """chi(3) in (m/V)^2 from the nonlinear index n2 in m^2/W."""
    if not n0 > 0:
        raise DomainError("n0 must be > 0")
    return 4.0 * n0**2 * EPS0 * C_LIGHT * n2 / 3.0


# --- grid files -------------------------------------------------------------


def _tokens(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for tok in line.split():
            yield lineno, tok


def parse_field_grid(text: str, path=None) -> FieldGrid:
    toks = list(_tokens(text))

    def take(i, kind, what):
        if i >= len(toks):
            last = toks[-1][0] if toks else 1
            raise DeviceFileError(f"unexpected end of file while reading {what}", path, last)
        lineno, tok = toks[i]
        try:
            return kind(tok)
        except ValueError:
            raise DeviceFileError(f"cannot read {what} from {tok!r}", path, lineno) from None

    dims = [take(i, int, f"grid size n{ax}") for i, ax in enumerate("xyz")]
    if min(dims) < 1:
        raise DeviceFileError(f"grid sizes must be >= 1, got {dims}", path, toks[0][0])
    steps = [take(3 + i, float, f"spacing d{ax}") for i, ax in enumerate("xyz")]
    if min(steps) <= 0:
        raise DeviceFileError(f"grid spacings must be > 0, got {steps}", path, toks[3][0])
    count = dims[0] * dims[1] * dims[2]
    values = np.empty(count)
    for k in range(count):
        values[k] = take(6 + k, float, f"amplitude #{k}")
    if len(toks) > 6 + count:
        lineno, tok = toks[6 + count]
        raise DeviceFileError(
            f"expected {count} amplitudes, found extra value {tok!r}", path, lineno
        )
    amp = values.reshape(dims, order="F")
    return FieldGrid(amp, *steps)


def read_field_grid(path) -> FieldGrid:
    path = Path(path)
    return parse_field_grid(path.read_text(), path=path)


def format_field_grid(g: FieldGrid) -> str:
    nx, ny, nz = g.shape
    lines = [f"{nx} {ny} {nz}", f"{g.dx!r} {g.dy!r} {g.dz!r}"]
    flat = g.amplitude.reshape(-1, order="F")
    for start in range(0, flat.size, 8):
        lines.append(" ".join(repr(float(v)) for v in flat[start:start + 8]))
    return "\n".join(lines) + "\n"


def write_field_grid(path, g: FieldGrid):
    Path(path).write_text(format_field_grid(g))
