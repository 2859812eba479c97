"""Series machinery for the transformed radial equation.

Peeling the decaying exponential and the origin phase factor off the radial
amplitude, zeta(r) = exp(-kappa r) r^{i a/2} xi(z) with z = -w r / a and
kappa = sqrt(1 - Omega^2), turns the second-order radial equation into a
confluent-Heun-type equation with regular singular points z = 0 and z = -1
and an irregular point at infinity.  Cleared of denominators it reads

    P2(z) xi'' + P1(z) xi' + P0(z) xi = 0,
    P2 = z^2 + z,
    P1 = theta z^2 + (theta + i a) z + (1 + i a),
    P0 = (i a theta/2 + a^2/2)(z + 1) + (theta - i a)/2,

with theta = a sqrt(1 - Omega^2) / Omega.  This module builds Frobenius series
about z = 0 for both indicial branches, evaluates them with an honest tail
bound, and locates the complex frequencies at which the series coefficient
c_{n+1} vanishes (polynomial truncation at degree n).  Whether truncation
actually happens at the closed-form spectrum is *measured* (termination
defect), never assumed: with a three-term recurrence a vanishing c_{n+1}
does not force the later coefficients to vanish too.

No published Heun-function parameter convention is relied on anywhere; the
cleared polynomial form above, validated against the radial equation by
residual tests, is the single source of truth.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import (
    ConvergenceError,
    DegenerateExponentError,
    InvalidInputError,
    PrecisionExhaustedError,
    SingularInputError,
)
from .spectrum import ComplexOmega, StateSpec, omega_exact

__all__ = [
    "HeunParams",
    "TransformedODE",
    "FrobeniusSeries",
    "TruncationReport",
    "heun_params",
    "transform_ode",
    "frobenius_series",
    "heunc_eval",
    "solve_by_truncation",
]

#: trailing-coefficient level below which a stored series counts as a polynomial
TERMINATED_DEFECT = 1e-10

#: default number of series terms
DEFAULT_TERMS = 64


@dataclass(frozen=True)
class HeunParams:
    """The parameter quintuple (theta, eps, ups, sigma, rho) of the
    confluent-Heun-type form of the radial equation."""

    theta: complex
    eps: complex
    ups: complex
    sigma: complex
    rho: complex


def heun_params(omega: ComplexOmega, alpha: float) -> HeunParams:
    """Exact parameter quintuple for given frequency and coupling."""
    omega = complex(omega)
    if omega == 0:
        raise SingularInputError("Heun parameters undefined at Omega = 0")
    theta = alpha * cmath.sqrt((1.0 - omega) * (1.0 + omega)) / omega
    return HeunParams(
        theta=theta,
        eps=complex(0.0, -alpha),
        ups=complex(-2.0, 0.0),
        sigma=complex(-0.5 * alpha * alpha, 0.0),
        rho=complex(1.0 + 0.5 * alpha * alpha, 0.0),
    )


@dataclass(frozen=True)
class TransformedODE:
    """Cleared polynomial form P2 xi'' + P1 xi' + P0 xi = 0 of the transformed
    radial equation; coefficient tuples are ascending in z."""

    p2: Tuple[complex, ...]
    p1: Tuple[complex, ...]
    p0: Tuple[complex, ...]
    omega: complex
    alpha: float
    theta: complex

    @property
    def singular_points(self) -> Tuple[complex, complex]:
        """Roots of P2: the origin and the image of the zero of lambda(r)."""
        return (0.0 + 0.0j, -1.0 + 0.0j)

    def indicial_exponents(self) -> Tuple[complex, complex]:
        """Roots of the indicial equation at z = 0 (regular first)."""
        regular = 0.0 + 0.0j
        secondary = 1.0 - self.p1[0] / self.p2[1]
        return regular, secondary


def transform_ode(omega: ComplexOmega, alpha: float) -> TransformedODE:
    """Closed-form coefficient polynomials of the transformed equation.

    alpha = 0 is accepted as the degenerate limit: the equation collapses to
    z(z+1) xi'' + xi' = 0, whose bounded solution is constant.
    """
    omega = complex(omega)
    if omega == 0:
        raise SingularInputError("transformed equation undefined at Omega = 0")
    a = float(alpha)
    theta = a * cmath.sqrt((1.0 - omega) * (1.0 + omega)) / omega
    ia = 1j * a
    p2 = (0.0 + 0.0j, 1.0 + 0.0j, 1.0 + 0.0j)
    p1 = (1.0 + ia, theta + ia, theta)
    p01 = 0.5 * ia * theta + 0.5 * a * a
    p0 = (p01 + 0.5 * theta - 0.5 * ia, p01)
    return TransformedODE(p2=p2, p1=p1, p0=p0, omega=omega, alpha=a, theta=theta)


@dataclass(frozen=True)
class FrobeniusSeries:
    """Series solution z^exponent * sum_k c_k z^k with c_0 = 1.

    termination_defect is populated when a target polynomial degree was given
    to frobenius_series; it is max(|c_{n+1}|, |c_{n+2}|) / max_k |c_k|, the
    honest two-coefficient measure of how far the series is from truncating.
    """

    exponent: complex
    coefficients: Tuple[complex, ...]
    radius: float = 1.0
    termination_defect: Optional[float] = None

    @property
    def tail_defect(self) -> float:
        """Relative magnitude of the last two stored coefficients."""
        mx = max(abs(c) for c in self.coefficients)
        if mx == 0.0:
            return 0.0
        return max(abs(self.coefficients[-1]), abs(self.coefficients[-2])) / mx

    @property
    def terminated(self) -> bool:
        return self.tail_defect < TERMINATED_DEFECT

    def defect_at(self, degree: int) -> float:
        """Termination defect for truncation at the given polynomial degree."""
        if degree + 2 >= len(self.coefficients):
            raise InvalidInputError("series too short for requested degree")
        mx = max(abs(c) for c in self.coefficients[: degree + 1])
        return max(abs(self.coefficients[degree + 1]), abs(self.coefficients[degree + 2])) / mx

    def evaluate(self, z: complex, derivative: bool = False):
        """Full-sum evaluation; with derivative=True returns (xi, dxi/dz)."""
        z = complex(z)
        c = self.coefficients
        s = 0.0 + 0.0j
        for ck in reversed(c):
            s = s * z + ck
        pref = 1.0 + 0.0j if self.exponent == 0 else z ** self.exponent
        if not derivative:
            return pref * s
        ds = 0.0 + 0.0j
        for k in range(len(c) - 1, 0, -1):
            ds = ds * z + k * c[k]
        # (z^rho S)' = z^rho (S' + rho S / z)
        if self.exponent == 0:
            return pref * s, pref * ds
        return pref * s, pref * (ds + self.exponent * s / z)


def _indicial(ode: TransformedODE, x: complex) -> complex:
    return ode.p2[1] * x * (x - 1.0) + ode.p1[0] * x


def _series_coefficients(ode: TransformedODE, exponent: complex, n_terms: int) -> List[complex]:
    """Coefficients from the recurrence implied by the cleared polynomials.

    Derived mechanically: the z^{m + rho - 1} coefficient of the substituted
    series couples c_m to c_{m-1} and c_{m-2} because the polynomial degrees
    are bounded by (2, 2, 1).
    """
    p2, p1, p0 = ode.p2, ode.p1, ode.p0
    c: List[complex] = [1.0 + 0.0j]
    for m in range(1, n_terms + 1):
        acc = 0.0 + 0.0j
        for k in range(max(0, m - 2), m):
            term = 0.0 + 0.0j
            j2 = m - k + 1
            if j2 < len(p2):
                term += p2[j2] * (k + exponent) * (k + exponent - 1.0)
            j1 = m - k
            if j1 < len(p1):
                term += p1[j1] * (k + exponent)
            j0 = m - k - 1
            if 0 <= j0 < len(p0):
                term += p0[j0]
            acc += c[k] * term
        c.append(-acc / _indicial(ode, m + exponent))
    return c


def frobenius_series(
    ode: TransformedODE,
    exponent_choice: str = "regular",
    n_terms: int = DEFAULT_TERMS,
    target_degree: Optional[int] = None,
) -> FrobeniusSeries:
    """Frobenius series about z = 0 for the chosen indicial branch.

    The secondary branch is rejected when the two indicial exponents clash
    (alpha = 0), since the second solution then involves a logarithm.
    """
    if n_terms < 4:
        raise InvalidInputError("at least 4 series terms are required")
    regular, secondary = ode.indicial_exponents()
    if exponent_choice == "regular":
        exponent = regular
    elif exponent_choice == "secondary":
        if abs(secondary - regular) < 1e-14:
            raise DegenerateExponentError(
                "secondary branch degenerates onto the regular one at alpha = 0"
            )
        exponent = secondary
    else:
        raise InvalidInputError(f"exponent_choice must be 'regular' or 'secondary', got {exponent_choice!r}")
    coeffs = tuple(_series_coefficients(ode, exponent, n_terms))
    defect = None
    if target_degree is not None:
        if target_degree + 2 > n_terms:
            raise InvalidInputError("n_terms too small for requested target degree")
        mx = max(abs(c) for c in coeffs[: target_degree + 1])
        defect = max(abs(coeffs[target_degree + 1]), abs(coeffs[target_degree + 2])) / mx
    return FrobeniusSeries(exponent=exponent, coefficients=coeffs, termination_defect=defect)


def heunc_eval(series: FrobeniusSeries, z: complex, tol: float = 1e-12) -> Tuple[complex, float]:
    """Partial-sum evaluation with a tail estimate below tol.

    Returns (value, achieved tail bound).  For a terminated (polynomial)
    series any z is admissible and the bound is zero; otherwise the geometric
    tail estimate q/(1-q) * max of the last three included terms is used,
    with q = |z| / radius.
    """
    z = complex(z)
    if series.terminated:
        return series.evaluate(z), 0.0
    q = abs(z) / series.radius
    if q >= 1.0:
        raise PrecisionExhaustedError(
            f"|z| = {abs(z):g} is outside the convergence disk of a non-terminated series"
        )
    pref = 1.0 + 0.0j if series.exponent == 0 else z ** series.exponent
    scale = abs(pref)
    geom = q / (1.0 - q)
    total = 0.0 + 0.0j
    zk = 1.0 + 0.0j
    recent = [0.0, 0.0, 0.0]
    for k, ck in enumerate(series.coefficients):
        term = ck * zk
        total += term
        recent[k % 3] = abs(term)
        zk *= z
        if k >= 2:
            bound = max(recent) * geom * scale
            if bound < tol:
                return pref * total, bound
    raise PrecisionExhaustedError(
        f"tail bound {max(recent) * geom * scale:g} did not reach tol = {tol:g} "
        f"within {len(series.coefficients)} stored terms"
    )


@dataclass(frozen=True)
class TruncationReport:
    """Outcome of the truncation eigenvalue search.

    rel_c_next / rel_c_next2 are |c_{n+1}| and |c_{n+2}| relative to
    max_k |c_k| at the returned frequency; their maximum is the termination
    defect there.  defect_at_closed_form is the same measure evaluated at the
    closed-form spectrum omega_exact, i.e. the direct observable for whether
    the closed-form frequencies truncate the series (they do not have to:
    the recurrence is three-term, so the single condition c_{n+1} = 0 leaves
    c_{n+2} free, and both numbers are reported).
    """

    omega: complex
    converged: bool
    iterations: int
    rel_c_next: float
    rel_c_next2: float
    distance_to_closed_form: float
    defect_at_closed_form: float

    @property
    def termination_defect(self) -> float:
        return max(self.rel_c_next, self.rel_c_next2)


def _mp_context(dps: int):
    import mpmath

    mpmath.mp.dps = dps
    return mpmath


def _mp_theta_polys(mp, n_coeffs: int, alpha, exponent=0):
    """Series coefficients c_m as polynomials in theta (ascending lists).

    Same recurrence as _series_coefficients with the polynomial dependence on
    theta kept symbolic: every P1/P0 coefficient is affine in theta.
    """
    a = alpha
    ia = 1j * a

    def padd(p, q):
        n = max(len(p), len(q))
        return [
            (p[i] if i < len(p) else mp.mpc(0)) + (q[i] if i < len(q) else mp.mpc(0))
            for i in range(n)
        ]

    def paffine(p, c0, c1):
        # multiply polynomial p (in theta) by (c0 + c1 * theta)
        out = [mp.mpc(0)] * (len(p) + 1)
        for i, x in enumerate(p):
            out[i] += x * c0
            out[i + 1] += x * c1
        return out

    cs = [[mp.mpc(1)]]
    for m in range(1, n_coeffs):
        m_ = mp.mpf(m) + exponent
        # B(m): c_{m-1} weight = (m-1)(m-2) p2_2 + (m-1) p1_1 + p0_0
        b0 = (m_ - 1) * (m_ - 2) + (m_ - 1) * ia + a * a / 2 - ia / 2
        b1 = (m_ - 1) + ia / 2 + mp.mpf(1) / 2
        # C(m): c_{m-2} weight = (m-2) p1_2 + p0_1
        c0 = a * a / 2
        c1 = (m_ - 2) + ia / 2
        A = m_ * (m_ - 1) + m_ * (1 + ia)
        term = paffine(cs[m - 1], b0, b1)
        if m >= 2:
            term = padd(term, paffine(cs[m - 2], c0, c1))
        cs.append([-x / A for x in term])
    return cs


def _mp_peval(mp, poly, x):
    out = mp.mpc(0)
    for c in reversed(poly):
        out = out * x + c
    return out


def _mp_theta_of_omega(mp, omega, alpha):
    return alpha * mp.sqrt((1 - omega) * (1 + omega)) / omega


def solve_by_truncation(
    spec: StateSpec,
    omega0: Optional[ComplexOmega] = None,
    rel_tol: float = 1e-12,
    dps: int = 40,
) -> Tuple[ComplexOmega, TruncationReport]:
    """Find the frequency at which the series coefficient c_{n+1} vanishes.

    The coefficient is a polynomial of degree n+1 in theta, so the search runs
    in the theta variable where the function is entire (the principal square
    root in theta(Omega) has a cut along real Omega > 1 that would break an
    iteration in Omega).  Candidate roots seed a complex secant polish; the
    branch-consistent root closest to the seed frequency is returned together
    with the defect report.  Extended-precision (quad-plus) arithmetic is used
    throughout because the coefficients cancel heavily near a root.
    """
    n, a = spec.n, spec.alpha_eff
    seed = complex(omega0) if omega0 is not None else omega_exact(spec)
    if a == 0.0:
        report = TruncationReport(
            omega=1.0 + 0.0j, converged=True, iterations=0,
            rel_c_next=0.0, rel_c_next2=0.0,
            distance_to_closed_form=0.0, defect_at_closed_form=0.0,
        )
        return 1.0 + 0.0j, report
    mp = _mp_context(dps)
    a_mp = mp.mpf(repr(a))
    cs = _mp_theta_polys(mp, n + 3, a_mp)
    poly = cs[n + 1]
    roots = mp.polyroots(list(reversed(poly)), maxsteps=200, extraprec=80)

    # map each theta-root to its branch-consistent frequency
    candidates = []
    for th in roots:
        s2 = (th / a_mp) ** 2
        denom = 1 + s2
        if abs(denom) < mp.mpf("1e-25"):
            continue  # frequency at infinity
        om = mp.sqrt(1 / denom)
        for cand in (om, -om):
            if abs(_mp_theta_of_omega(mp, cand, a_mp) - th) < mp.mpf("1e-15") * max(1, abs(th)):
                candidates.append((cand, th))
                break
    if not candidates:
        raise ConvergenceError(
            f"no branch-consistent truncation frequency found for {spec}", trace=[]
        )
    candidates.sort(key=lambda t: abs(complex(t[0]) - seed))
    om_root, th_root = candidates[0]

    # complex secant polish on c_{n+1}(theta)
    f = lambda th: _mp_peval(mp, poly, th)
    x0 = th_root * (1 + mp.mpf("1e-8")) + mp.mpf("1e-30")
    x1 = th_root
    f0, f1 = f(x0), f(x1)
    trace = [(complex(x1), float(abs(f1)))]
    iterations = 0
    for iterations in range(1, 61):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        x0, f0, x1 = x1, f1, x2
        f1 = f(x1)
        trace.append((complex(x1), float(abs(f1))))
        if abs(x1 - x0) < mp.mpf("1e-35") * max(1, abs(x1)):
            break
    th_root = x1

    s2 = (th_root / a_mp) ** 2
    om = mp.sqrt(1 / (1 + s2))
    if abs(_mp_theta_of_omega(mp, om, a_mp) - th_root) > abs(
        _mp_theta_of_omega(mp, -om, a_mp) - th_root
    ):
        om = -om
    coeff_values = [_mp_peval(mp, p, th_root) for p in cs]
    mx = max(abs(c) for c in coeff_values[: n + 1])
    rel_next = float(abs(coeff_values[n + 1]) / mx)
    rel_next2 = float(abs(coeff_values[n + 2]) / mx)
    converged = rel_next < rel_tol
    if not converged:
        raise ConvergenceError(
            f"truncation secant stalled at |c_(n+1)|/max|c| = {rel_next:g} for {spec}",
            trace=trace,
        )

    # defect at the closed-form spectrum, for the report
    th_exact = _mp_theta_of_omega(mp, mp.mpc(omega_exact(spec)), a_mp)
    exact_values = [_mp_peval(mp, p, th_exact) for p in cs]
    mx_e = max(abs(c) for c in exact_values[: n + 1])
    defect_exact = float(max(abs(exact_values[n + 1]), abs(exact_values[n + 2])) / mx_e)

    omega_root = complex(om)
    report = TruncationReport(
        omega=omega_root,
        converged=True,
        iterations=iterations,
        rel_c_next=rel_next,
        rel_c_next2=rel_next2,
        distance_to_closed_form=abs(omega_root - omega_exact(spec)),
        defect_at_closed_form=defect_exact,
    )
    return omega_root, report
