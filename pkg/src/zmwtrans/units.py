"""Unit conventions and conversions used across the package.

Lengths are nanometers, angular frequencies rad/s, wavenumbers nm^-1,
polarizabilities nm^3 (Gaussian volume convention).  Time dependence is
exp(-i*omega*t), which makes the imaginary part of a polarizability
positive at resonance.
"""

from __future__ import annotations

import numpy as np
from scipy.constants import c as _c_m_per_s
from scipy.constants import h as PLANCK_J_S

__all__ = ["C_NM_PER_S", "PLANCK_J_S", "wavenumber", "angular_frequency", "wavelength_nm"]

C_NM_PER_S = _c_m_per_s * 1e9  # speed of light, nm/s


def wavenumber(omega):
    """Vacuum wavenumber k = omega/c in nm^-1."""
    return omega / C_NM_PER_S


def angular_frequency(wavelength):
    """Angular frequency in rad/s for a vacuum wavelength in nm."""
    return 2.0 * np.pi * C_NM_PER_S / wavelength


def wavelength_nm(omega):
    """Vacuum wavelength in nm for an angular frequency in rad/s."""
    return 2.0 * np.pi * C_NM_PER_S / omega
