"""Complex permittivity models for the hole wall and the meta-atom.

Three kinds are supported: an idealized perfect conductor, the lossless
Drude law eps = 1 - (omega_pl/omega)^2, and tabulated dispersion data
interpolated linearly in wavelength.  The Drude law is kept lossless on
purpose: the meta-atom's linewidth must come only from the radiative term
of its polarizability denominator, so no collision rate is added.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "MaterialKind",
    "MaterialModel",
    "drude_permittivity",
    "tabulated_permittivity",
    "load_material_table",
]


class MaterialKind(str, Enum):
    PERFECT_CONDUCTOR = "pec"
    DRUDE = "drude"
    TABULATED = "tabulated"


def drude_permittivity(omega: float, omega_pl: float) -> complex:
    """Lossless Drude permittivity 1 - (omega_pl/omega)^2.

    omega and omega_pl are angular frequencies in rad/s; omega must be
    positive.  The result is purely real but returned as complex to keep a
    uniform permittivity interface.
    """
    if np.any(np.asarray(omega) <= 0.0):
        raise ValueError("frequency must be positive for the Drude law")
    if omega_pl <= 0.0:
        raise ValueError("plasma frequency must be positive")
    return 1.0 - (omega_pl / omega) ** 2 + 0.0j


@dataclass(frozen=True)
class MaterialModel:
    """Wall or meta-atom material description.

    For DRUDE, plasma_frequency (rad/s) must be set.  For TABULATED, table
    must hold (wavelength_nm, complex_permittivity) rows sorted strictly
    ascending in wavelength, at least two of them.
    """

    kind: MaterialKind
    plasma_frequency: float | None = None
    table: tuple[tuple[float, complex], ...] | None = None

    def __post_init__(self) -> None:
        kind = MaterialKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is MaterialKind.DRUDE:
            if self.plasma_frequency is None or self.plasma_frequency <= 0.0:
                raise ValueError("Drude material needs a positive plasma_frequency")
        if kind is MaterialKind.TABULATED:
            if self.table is None or len(self.table) < 2:
                raise ValueError("tabulated material needs at least 2 rows")
            wavelengths = [row[0] for row in self.table]
            if any(b <= a for a, b in zip(wavelengths, wavelengths[1:])):
                raise ValueError("table wavelengths must be strictly increasing")

    @classmethod
    def perfect_conductor(cls) -> "MaterialModel":
        return cls(MaterialKind.PERFECT_CONDUCTOR)

    @classmethod
    def drude(cls, plasma_frequency: float) -> "MaterialModel":
        return cls(MaterialKind.DRUDE, plasma_frequency=plasma_frequency)

    @classmethod
    def tabulated(cls, rows) -> "MaterialModel":
        return cls(
            MaterialKind.TABULATED,
            table=tuple((float(w), complex(e)) for w, e in rows),
        )


def tabulated_permittivity(model: MaterialModel, wavelength: float) -> complex:
    """Permittivity at a wavelength (nm), linear interpolation per part.

    Real and imaginary parts are interpolated independently in wavelength.
    Queries outside the table range raise a ValueError that names the
    valid interval.
    """
    if model.kind is not MaterialKind.TABULATED:
        raise ValueError(f"material kind {model.kind.value!r} has no table")
    wavelengths = np.array([row[0] for row in model.table])
    lo, hi = wavelengths[0], wavelengths[-1]
    if wavelength < lo or wavelength > hi:
        raise ValueError(
            f"wavelength {wavelength:g} nm outside table range [{lo:g}, {hi:g}] nm"
        )
    eps = np.array([row[1] for row in model.table])
    re = np.interp(wavelength, wavelengths, eps.real)
    im = np.interp(wavelength, wavelengths, eps.imag)
    return complex(re, im)


def load_material_table(path) -> MaterialModel:
    """Read a tabulated material file.

    Format: one row per line, three comma-separated numeric columns
    (wavelength_nm, eps_real, eps_imag), '.' decimal point, lines starting
    with '#' ignored.  Rows must already be sorted ascending in wavelength.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 comma-separated columns")
            try:
                wl, re, im = (float(p) for p in parts)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric column ({exc})") from exc
            if rows and wl <= rows[-1][0]:
                raise ValueError(f"{path}:{lineno}: wavelengths must increase")
            rows.append((wl, complex(re, im)))
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least 2 data rows")
    return MaterialModel.tabulated(rows)
