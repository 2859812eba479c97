"""Closed-form complex frequency spectrum of the Coulomb-bound electron-positron
pair in its S state, together with the quantization-condition residual and an
independent complex-Newton root finder on it.

The dimensionless frequency of the state with principal quantum number n and
effective coupling a is

    Omega_n = sqrt[ (n^4 + 3 a^2 n^2 / 4 - i a^3 n / 4) / (n^4 + a^2 n^2) ]

on the principal square-root branch.  Internally the algebraically identical
rearrangement Omega_n = sqrt(1 - a^2 / (4 n (n - i a))) is used, which keeps
full precision for large n where the quartic terms would swamp the coupling
terms.  The quantization condition whose root this is reads

    F(Omega) = -a^2/2 + (n - i a / 2) * theta,   theta = a sqrt(1 - Omega^2) / Omega.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .constants import PhysicalConstants, omega_to_observables
from .errors import ConvergenceError, InvalidInputError, SingularInputError

__all__ = [
    "StateSpec",
    "ComplexOmega",
    "SpectrumRow",
    "METHODS",
    "omega_exact",
    "omega_approx",
    "decay_time_approx",
    "quantization_residual",
    "solve_quantization",
    "sweep",
]

# The dimensionless frequency Omega = hbar*w/(2 m_e c^2) is carried as a plain
# complex number; the physical branch has 0 < Re < 1 and Im < 0.
ComplexOmega = complex

METHODS = ("exact", "approx", "newton", "truncation", "shooting")


@dataclass(frozen=True)
class StateSpec:
    """One bound state: principal quantum number n and effective coupling.

    alpha_eff = 0 is accepted as an explicit degenerate input (free pair,
    Omega = 1); the invariant suites apply for 0 < alpha_eff < 1.
    """

    n: int
    alpha_eff: float

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise InvalidInputError(f"n must be an integer >= 1, got {self.n!r}")
        a = self.alpha_eff
        if not (isinstance(a, (int, float)) and 0.0 <= a < 1.0):
            raise InvalidInputError(f"alpha_eff must lie in [0, 1), got {a!r}")


@dataclass(frozen=True)
class SpectrumRow:
    """One line of a spectrum table; energies in eV, decay time in seconds."""

    n: int
    alpha_eff: float
    re_omega: float
    im_omega: float
    annihilation_energy_eV: float
    binding_energy_eV: float
    decay_time_s: float
    method: str


def omega_exact(spec: StateSpec) -> ComplexOmega:
    """Closed-form dimensionless frequency on the principal branch."""
    n, a = spec.n, spec.alpha_eff
    if a == 0.0:
        return 1.0 + 0.0j
    return cmath.sqrt(1.0 - a * a / (4.0 * n * (n - 1j * a)))


def omega_approx(spec: StateSpec) -> ComplexOmega:
    """Three-term power expansion Omega ~ 1 - a^2/(8n^2) - i a^3/(8n^3).

    Explicit products (no pow) keep the coupling/number scalings of the two
    correction terms exact under power-of-two rescalings.
    """
    n, a = spec.n, spec.alpha_eff
    if a == 0.0:
        return 1.0 + 0.0j
    n3 = n * n * n
    re = 1.0 - (a * a) / (8.0 * n * n)
    im = -(a * a * a) / (8.0 * n3)
    return complex(re, im)


def decay_time_approx(spec: StateSpec, consts: Optional[PhysicalConstants] = None) -> float:
    """Leading-order proper decay time 4 n^3 hbar / (m_e c^2 a^3), seconds."""
    if consts is None:
        consts = PhysicalConstants()
    n, a = spec.n, spec.alpha_eff
    if a == 0.0:
        raise InvalidInputError("free pair (alpha_eff = 0) has no finite decay time")
    base = 4.0 * consts.hbar / (consts.electron_rest_energy * (a * a * a))
    return (n * n * n) * base


def _theta(omega: ComplexOmega, alpha: float) -> complex:
    """theta = a sqrt(1 - Omega^2) / Omega on the principal branch."""
    return alpha * cmath.sqrt((1.0 - omega) * (1.0 + omega)) / omega


def quantization_residual(omega: ComplexOmega, spec: StateSpec) -> complex:
    """Residual F(Omega) of the polynomial quantization condition.

    F vanishes identically at omega_exact(spec); |F| at a trial Omega measures
    how far the trial lies from the closed-form spectrum.
    """
    omega = complex(omega)
    if omega == 0:
        raise SingularInputError("quantization residual undefined at Omega = 0")
    n, a = spec.n, spec.alpha_eff
    if a == 0.0:
        return 0.0 + 0.0j
    return -0.5 * a * a + (n - 0.5j * a) * _theta(omega, a)


def _residual_derivative(omega: ComplexOmega, spec: StateSpec) -> complex:
    """Analytic dF/dOmega = -(n - i a/2) a / (Omega^2 sqrt(1 - Omega^2))."""
    n, a = spec.n, spec.alpha_eff
    root = cmath.sqrt((1.0 - omega) * (1.0 + omega))
    return -(n - 0.5j * a) * a / (omega * omega * root)


def solve_quantization(
    spec: StateSpec,
    omega0: Optional[ComplexOmega] = None,
    tol_residual: float = 1e-13,
    tol_step: float = 1e-15,
    max_iterations: int = 50,
) -> ComplexOmega:
    """Complex Newton iteration on the quantization residual.

    Uses the analytically differentiated residual; converged when
    |F| < tol_residual or the Newton step falls below tol_step.  Raises
    ConvergenceError carrying the iterate trace otherwise.
    """
    if spec.alpha_eff == 0.0:
        return 1.0 + 0.0j
    omega = complex(omega0) if omega0 is not None else omega_approx(spec)
    trace: List[Tuple[complex, float]] = []
    for _ in range(max_iterations):
        f = quantization_residual(omega, spec)
        trace.append((omega, abs(f)))
        if abs(f) < tol_residual:
            return omega
        step = -f / _residual_derivative(omega, spec)
        omega = omega + step
        if abs(step) < tol_step:
            f = quantization_residual(omega, spec)
            trace.append((omega, abs(f)))
            return omega
    raise ConvergenceError(
        f"Newton iteration on the quantization residual did not converge for {spec}",
        trace=trace,
    )


def _solver_for(method: str):
    # imported lazily: spectrum is a dependency of both heun and radial
    if method == "truncation":
        from .heun import solve_by_truncation

        return lambda spec: solve_by_truncation(spec)[0]
    if method == "shooting":
        from .radial import shooting_solve

        return lambda spec: shooting_solve(spec)[0]
    raise InvalidInputError(f"unknown method {method!r}")


def _omega_for(method: str, spec: StateSpec) -> ComplexOmega:
    if method == "exact":
        return omega_exact(spec)
    if method == "approx":
        return omega_approx(spec)
    if method == "newton":
        return solve_quantization(spec)
    return _solver_for(method)(spec)


def sweep(
    n_values: Iterable[int],
    alpha_values: Sequence[float],
    method: str = "exact",
    consts: Optional[PhysicalConstants] = None,
) -> List[SpectrumRow]:
    """Evaluate the spectrum over a (n, alpha) grid, ordered by (alpha, n).

    Rows are internally consistent with omega_to_observables applied to the
    row's complex frequency.
    """
    if consts is None:
        consts = PhysicalConstants()
    if method not in METHODS:
        raise InvalidInputError(f"method must be one of {METHODS}, got {method!r}")
    ns = sorted(set(int(n) for n in n_values))
    alphas = sorted(set(float(a) for a in alpha_values))
    if not ns or not alphas:
        raise InvalidInputError("sweep requires non-empty n and alpha ranges")
    rows: List[SpectrumRow] = []
    for a in alphas:
        for n in ns:
            spec = StateSpec(n, a)
            omega = _omega_for(method, spec)
            obs = omega_to_observables(omega, consts)
            rows.append(
                SpectrumRow(
                    n=n,
                    alpha_eff=a,
                    re_omega=omega.real,
                    im_omega=omega.imag,
                    annihilation_energy_eV=obs.annihilation_energy,
                    binding_energy_eV=obs.binding_energy,
                    decay_time_s=obs.proper_decay_time,
                    method=method,
                )
            )
    return rows
