"""Three-term recurrences and their asymptotic classification.

A recurrence

    c_{n+1} + a(n, x) c_n + b(n, x) c_{n-1} = 0        (n >= 0, c_{-1} = 0)

with power-law coefficient growth a_n ~ a_coef * n**delta,
b_n ~ b_coef * n**upsilon possesses a dominant and a minimal solution.
The minimal one decays fastest (its successive ratios vanish like
-(b_coef/a_coef) * n**(delta - upsilon) in reciprocal) and is the only
one that generates normalizable states; it can be reached reliably only
by backward continued-fraction evaluation, never by upward iteration.

This module holds the recurrence container, the admissibility check on
the asymptotic profile, and the tail-ratio seed used to start backward
evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import NumericsError


def _no_poles(x_lo: float, x_hi: float) -> list[float]:
    return []


@dataclass(frozen=True)
class AsymptoticProfile:
    """Power-law growth exponents and leading coefficients.

    a(n, x) ~ a_coef * n**delta and b(n, x) ~ b_coef * n**upsilon as
    n -> infinity; tau = delta - upsilon controls the decay rate of the
    minimal solution.
    """

    delta: float
    upsilon: float
    a_coef: float
    b_coef: float

    @property
    def tau(self) -> float:
        return self.delta - self.upsilon


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the growth-ordering and normalizability checks."""

    two_delta_gt_upsilon: bool
    tau_ok: bool
    k: float
    bargmann_ok: bool
    notes: str


@dataclass(frozen=True)
class Recurrence:
    """Immutable three-term recurrence with its asymptotic profile.

    ``a`` and ``b`` map (n, x) to the coefficients at level n for energy
    parameter x; both must be pure functions.  ``b`` is only ever queried
    for n >= 1 and must be nonzero away from declared poles.
    ``explicit_poles`` lists the abscissas inside a window where some
    coefficient is singular (empty for most models).  ``energy_shift``
    records the map between the recurrence variable and physical energy:
    E/omega = x - energy_shift.
    """

    a: Callable[[int, float], float]
    b: Callable[[int, float], float]
    profile: AsymptoticProfile
    explicit_poles: Callable[[float, float], list[float]] = _no_poles
    energy_shift: float = 0.0
    label: str = ""

    def energy_of(self, x: float) -> float:
        """Physical energy E/omega for recurrence variable x."""
        return x - self.energy_shift

    def x_of(self, energy: float) -> float:
        """Recurrence variable x for physical energy E/omega."""
        return energy + self.energy_shift


def classify(profile: AsymptoticProfile) -> AdmissibilityReport:
    """Check whether a profile admits a normalizable minimal solution.

    The report is advisory: recurrences outside the admissible class can
    still be scanned (tau > 0 suffices to define the characteristic
    series away from its poles), so callers should warn, not fail.

    Raises ValueError if a_coef vanishes, since the growth ordering is
    then undefined.
    """
    if profile.a_coef == 0:
        raise ValueError("asymptotically degenerate leading coefficient")
    tau = profile.tau
    two_delta_gt_upsilon = 2.0 * profile.delta > profile.upsilon
    tau_ok = tau >= 0.5
    k = -profile.b_coef / profile.a_coef
    bargmann_ok = tau > 0.5 or (tau == 0.5 and abs(k) < 1.0)

    notes: list[str] = []
    if not two_delta_gt_upsilon:
        notes.append("2*delta <= upsilon: coefficient ratio b_n/a_n does not vanish")
    if not tau_ok:
        notes.append("tau < 1/2: minimal solution decays too slowly")
    if tau == 0.5:
        notes.append("tau == 1/2 boundary: sufficient bound |k| < 1 applied")
        if abs(k) >= 1.0:
            notes.append(f"|k| = {abs(k):g} >= 1")
    return AdmissibilityReport(
        two_delta_gt_upsilon=two_delta_gt_upsilon,
        tau_ok=tau_ok,
        k=k,
        bargmann_ok=bargmann_ok,
        notes="; ".join(notes) if notes else "ok",
    )


def tail_ratio_estimate(rec: Recurrence, n: int, x: float) -> float:
    """Leading estimate -b(n+1, x)/a(n+1, x) of the minimal ratio m_{n+1}/m_n.

    Used to seed backward continued-fraction evaluation at depth n with a
    nonzero tail, which converges in fewer levels than a zero tail.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = rec.a(n + 1, x)
    if a == 0.0:
        raise NumericsError("tail seed undefined; increase n")
    return -rec.b(n + 1, x) / a


def upward_recursion(rec: Recurrence, x: float, c0: float, c1: float,
                     n_max: int) -> list[float]:
    """Iterate c_{n+1} = -(a_n c_n + b_n c_{n-1}) upward from (c0, c1).

    Returns [c_0, ..., c_{n_max}].  Stable only while the iterate stays on
    the dominant branch; rounding reintroduces the dominant solution when
    one tries to follow the minimal one this way.
    """
    out = [c0, c1]
    for n in range(1, n_max):
        out.append(-(rec.a(n, x) * out[n] + rec.b(n, x) * out[n - 1]))
    return out[: n_max + 1]
