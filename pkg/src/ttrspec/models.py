"""Model catalog: concrete recurrences and closed-form reference levels.

Each constructor returns an immutable Recurrence whose energy_shift
records the model's x <-> E/omega convention, so downstream code never
hard-codes it.  kappa = lambda/omega and delta = mu/omega are the
dimensionless coupling and level splitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CoefficientPoleError
from .recurrence import AsymptoticProfile, Recurrence

PARITY_PLUS = "plus"
PARITY_MINUS = "minus"

#: models for which recurrence coefficients are available (F-based scans)
RECURRENCE_MODELS = ("dho", "rabi", "rabi-parity")
#: models exposed through the diagonalization oracle only
ORACLE_ONLY_MODELS = ("jc", "gen-rabi", "rabi-modified")


@dataclass(frozen=True)
class DhoParams:
    """Displaced harmonic oscillator: coupling kappa, frequency omega."""

    kappa: float
    omega: float = 1.0

    def __post_init__(self):
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")
        if self.omega <= 0:
            raise ValueError("omega must be positive")


@dataclass(frozen=True)
class RabiParams:
    kappa: float
    delta: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")
        if self.omega <= 0:
            raise ValueError("omega must be positive")


@dataclass(frozen=True)
class ParityRabiParams:
    kappa: float
    delta: float = 0.0
    omega: float = 1.0
    parity: str = PARITY_PLUS

    def __post_init__(self):
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.parity not in (PARITY_PLUS, PARITY_MINUS):
            raise ValueError("parity must be 'plus' or 'minus'")


@dataclass(frozen=True)
class GenRabiParams:
    """Deformed Rabi model (single-mode spin-boson form), oracle only."""

    kappa: float
    delta: float = 0.0
    omega: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")
        if self.omega <= 0:
            raise ValueError("omega must be positive")


@dataclass(frozen=True)
class JcParams:
    """Rotating-wave model: omega0 is the two-level splitting (mu = omega0/2)."""

    omega: float
    omega0: float
    lam: float

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")


def dho_recurrence(p: DhoParams) -> Recurrence:
    """c_{n+1} + (n - x)/((n+1) kappa) c_n + 1/(n+1) c_{n-1} = 0, x = E/omega."""
    kappa = p.kappa

    def a(n: int, x: float) -> float:
        return (n - x) / ((n + 1) * kappa)

    def b(n: int, x: float) -> float:
        return 1.0 / (n + 1)

    profile = AsymptoticProfile(delta=0.0, upsilon=-1.0,
                                a_coef=1.0 / kappa, b_coef=1.0)
    return Recurrence(a=a, b=b, profile=profile, label="dho")


def dho_exact_levels(p: DhoParams, l_max: int) -> list[float]:
    """Exact levels E_l/omega = l - kappa**2 for l = 0..l_max."""
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    k2 = p.kappa * p.kappa
    return [l - k2 for l in range(l_max + 1)]


def rabi_displaced_recurrence(p: RabiParams) -> Recurrence:
    """Rabi recurrence in the displaced-oscillator frame.

    c_{n+1} - f_n(x)/(n+1) c_n + 1/(n+1) c_{n-1} = 0 with
    f_n(x) = 2 kappa + (n - x - delta**2/(n - x)) / (2 kappa); the
    energy variable is shifted, x = E/omega + kappa**2.  For delta != 0
    the coefficients are singular at every nonnegative integer x.
    """
    kappa, delta = p.kappa, p.delta
    d2 = delta * delta

    def a(n: int, x: float) -> float:
        gap = n - x
        if delta == 0.0:
            f = 2.0 * kappa + gap / (2.0 * kappa)
        else:
            if gap == 0.0:
                raise CoefficientPoleError(
                    f"coefficient pole at level {n}: x = {n}")
            f = 2.0 * kappa + (gap - d2 / gap) / (2.0 * kappa)
        return -f / (n + 1)

    def b(n: int, x: float) -> float:
        return 1.0 / (n + 1)

    def poles(x_lo: float, x_hi: float) -> list[float]:
        # half-open [x_lo, x_hi); delta = 0 kills the singular factor
        if delta == 0.0:
            return []
        n0 = max(0, math.ceil(x_lo))
        n1 = math.ceil(x_hi) - 1
        return [float(n) for n in range(n0, n1 + 1)]

    profile = AsymptoticProfile(delta=0.0, upsilon=-1.0,
                                a_coef=-1.0 / (2.0 * kappa), b_coef=1.0)
    return Recurrence(a=a, b=b, profile=profile, explicit_poles=poles,
                      energy_shift=kappa * kappa, label="rabi")


def parity_rabi_recurrence(p: ParityRabiParams) -> Recurrence:
    """Parity-resolved Rabi recurrence, x = E/omega.

    c_{n+1} + [n - x +/- (-1)**n delta]/(kappa (n+1)) c_n
            + 1/(n+1) c_{n-1} = 0,

    the two signs giving the even and odd sectors of the reflection
    symmetry; at delta = 0 both reduce to the displaced-oscillator
    recurrence.
    """
    kappa, delta = p.kappa, p.delta
    s = 1.0 if p.parity == PARITY_PLUS else -1.0

    def a(n: int, x: float) -> float:
        signed = s * delta if n % 2 == 0 else -s * delta
        return (n - x + signed) / (kappa * (n + 1))

    def b(n: int, x: float) -> float:
        return 1.0 / (n + 1)

    profile = AsymptoticProfile(delta=0.0, upsilon=-1.0,
                                a_coef=1.0 / kappa, b_coef=1.0)
    return Recurrence(a=a, b=b, profile=profile,
                      label=f"rabi-parity-{p.parity}")


def jc_exact_levels(p: JcParams, n_max: int) -> list[float]:
    """Dressed-state levels in units of omega, sorted ascending.

    The uncoupled level -mu plus, for n = 0..n_max, the pair
    omega(n + 1/2) +/- sqrt((mu - omega/2)**2 + lam**2 (n+1)) with
    mu = omega0/2.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    mu = 0.5 * p.omega0
    levels = [-mu]
    for n in range(n_max + 1):
        mid = p.omega * (n + 0.5)
        split = math.sqrt((mu - 0.5 * p.omega) ** 2 + p.lam * p.lam * (n + 1))
        levels.append(mid + split)
        levels.append(mid - split)
    return sorted(v / p.omega for v in levels)


def bessel_fixture(x: float) -> Recurrence:
    """Bessel-function recurrence with a_n = -2n/x, b_n = 1.

    The minimal solution is proportional to J_n(x); the fixture
    demonstrates how upward iteration drifts onto the dominant branch.
    The coefficient functions ignore the scan variable (a_0 = 0, so the
    characteristic value equals r_0 = J_1(x)/J_0(x)).
    """
    if x == 0:
        raise ValueError("x must be nonzero")

    def a(n: int, _xe: float) -> float:
        return -2.0 * n / x

    def b(n: int, _xe: float) -> float:
        return 1.0

    profile = AsymptoticProfile(delta=1.0, upsilon=0.0,
                                a_coef=-2.0 / x, b_coef=1.0)
    return Recurrence(a=a, b=b, profile=profile, label="bessel")


def recurrences_for(model: str, params, parity: str = "both"):
    """Recurrence branches (rec, parity_label) for an F-based model tag."""
    if model == "dho":
        return [(dho_recurrence(params), None)]
    if model == "rabi":
        return [(rabi_displaced_recurrence(params), None)]
    if model == "rabi-parity":
        if isinstance(params, ParityRabiParams):
            label = 1 if params.parity == PARITY_PLUS else -1
            return [(parity_rabi_recurrence(params), label)]
        branches = []
        if parity in (PARITY_PLUS, "both"):
            branches.append((parity_rabi_recurrence(ParityRabiParams(
                params.kappa, params.delta, params.omega, PARITY_PLUS)), 1))
        if parity in (PARITY_MINUS, "both"):
            branches.append((parity_rabi_recurrence(ParityRabiParams(
                params.kappa, params.delta, params.omega, PARITY_MINUS)), -1))
        if not branches:
            raise ValueError("parity must be 'plus', 'minus' or 'both'")
        return branches
    raise ValueError(
        f"model '{model}' does not define recurrence coefficients; "
        "only the diagonalization oracle applies")
