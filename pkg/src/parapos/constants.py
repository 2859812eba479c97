"""Physical constants and conversion of the dimensionless complex frequency
into annihilation observables.

All energies are kept in eV and times in seconds throughout; the dimensionless
frequency is Omega = hbar*w / (2 m_e c^2), so Omega = 1 is the free-pair
threshold (two photons carrying exactly the rest energy 2 m_e c^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InvalidInputError, NonphysicalFrequencyError

__all__ = ["PhysicalConstants", "Observables", "constants", "omega_to_observables"]

# CODATA 2018
_ELECTRON_REST_ENERGY_EV = 510998.95000
_HBAR_EV_S = 6.582119569e-16
_ALPHA_FS = 7.2973525693e-3


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants in eV / eV s; alpha_fs is dimensionless."""

    electron_rest_energy: float = _ELECTRON_REST_ENERGY_EV
    hbar: float = _HBAR_EV_S
    alpha_fs: float = _ALPHA_FS

    def __post_init__(self):
        for name in ("electron_rest_energy", "hbar", "alpha_fs"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidInputError(f"{name} must be finite and positive, got {value!r}")
        if not self.alpha_fs < 1.0:
            raise InvalidInputError(f"alpha_fs must lie in (0, 1), got {self.alpha_fs!r}")

    @property
    def pair_rest_energy(self) -> float:
        """Rest energy 2 m_e c^2 of the electron-positron pair, in eV."""
        return 2.0 * self.electron_rest_energy


@dataclass(frozen=True)
class Observables:
    """Annihilation observables of one bound state.

    annihilation_energy  -- total photon energy, eV
    binding_energy       -- annihilation_energy - 2 m_e c^2, eV (<= 0 when bound)
    proper_decay_time    -- rest-frame lifetime in seconds (math.inf when stable)
    lifetime_infinite    -- explicit flag for Im(Omega) == 0
    """

    annihilation_energy: float
    binding_energy: float
    proper_decay_time: float
    lifetime_infinite: bool = False


def constants(**overrides: float) -> PhysicalConstants:
    """Return the CODATA defaults with any per-field overrides applied.

    Raises InvalidInputError for unknown fields or non-positive/non-finite
    values (validation happens in PhysicalConstants.__post_init__).
    """
    base = PhysicalConstants()
    if not overrides:
        return base
    valid = {"electron_rest_energy", "hbar", "alpha_fs"}
    unknown = set(overrides) - valid
    if unknown:
        raise InvalidInputError(f"unknown constant override(s): {sorted(unknown)}")
    return replace(base, **overrides)


def omega_to_observables(omega: complex, consts: PhysicalConstants | None = None) -> Observables:
    """Map the dimensionless complex frequency Omega to physical observables.

    annihilation_energy = 2 m_e c^2 * Re(Omega)
    binding_energy      = 2 m_e c^2 * (Re(Omega) - 1)
    proper_decay_time   = hbar / (2 m_e c^2 * |Im(Omega)|)

    The identity annihilation = 2 m_e c^2 + binding holds bit-for-bit because
    the annihilation energy is constructed as that exact sum.
    """
    if consts is None:
        consts = PhysicalConstants()
    omega = complex(omega)
    if not (omega.real > 0.0):
        raise NonphysicalFrequencyError(f"Re(Omega) must be positive, got {omega!r}")
    rest = consts.pair_rest_energy
    binding = rest * (omega.real - 1.0)
    annihilation = rest + binding
    if omega.imag == 0.0:
        return Observables(annihilation, binding, math.inf, lifetime_infinite=True)
    tau = consts.hbar / (rest * abs(omega.imag))
    return Observables(annihilation, binding, tau, lifetime_infinite=False)
