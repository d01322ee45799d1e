"""Radially symmetric Neumann problems on an annulus, reduced to 1D.

With t = h(r) = int_{R1}^r xi^{1-N} dxi the radial equation

    U'' + ((N-1)/r) U' + Q_mu(r) g(U) = 0,  U'(R1) = U'(R2) = 0

becomes v'' + a_mu(t) g(v) = 0 on [0, T] with T = h(R2), where
a(t) = r(t)^{2(N-1)} Q(r(t)) and v(t) = U(r(t)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _sint
from scipy import optimize as _sopt

from .errors import ConfigurationError, DomainError, PatternError
from .integrator import ProblemSpec
from .nonlinearity import NonlinearitySpec
from .weight import WeightSpec, detect_sign_pattern

_GRID_NODES = 8192


@dataclass(frozen=True)
class AnnulusProblem:
    """Annulus R1 < |x| < R2 in dimension N with radial weight Q(r)."""

    N: int
    R1: float
    R2: float
    Q: object              # callable Q(r) on [R1, R2]
    g: NonlinearitySpec
    mu: float
    kink_hints: tuple = ()

    def __post_init__(self):
        if self.N < 2:
            raise ConfigurationError("space dimension must be >= 2")
        if not 0 < self.R1 < self.R2:
            raise ConfigurationError("need 0 < R1 < R2")
        if not self.mu > 0:
            raise ConfigurationError("mu must be positive")

    def q_at(self, r):
        return np.asarray(self.Q(np.asarray(r, dtype=float)), dtype=float)


class RadialMap:
    """Monotone change of variable t = h(r) and its inverse r(t)."""

    def __init__(self, N, R1, R2):
        self.N = N
        self.R1 = R1
        self.R2 = R2
        self.T = self.h(R2)

    def h(self, r):
        r = np.asarray(r, dtype=float)
        if self.N == 2:
            out = np.log(r / self.R1)
        elif self.N == 3:
            out = 1.0 / self.R1 - 1.0 / r
        else:
            n = 2 - self.N
            out = (r ** n - self.R1 ** n) / n
        return float(out) if out.ndim == 0 else out

    def r_of_t(self, t):
        t = np.asarray(t, dtype=float)
        if self.N == 2:
            out = self.R1 * np.exp(t)
        elif self.N == 3:
            out = 1.0 / (1.0 / self.R1 - t)
        else:
            n = 2 - self.N
            out = (self.R1 ** n + n * t) ** (1.0 / n)
        return float(out) if out.ndim == 0 else out

    def __call__(self, t):
        return self.r_of_t(t)


def radial_to_1d(ap):
    """(ProblemSpec in Neumann mode, r_of_t map) for the annulus problem.

    The transformed weight a(t) = r(t)^{2(N-1)} Q(r(t)) is kept as a
    callable on [0, T]; the kink hints of Q are mapped through h.
    """
    rm = RadialMap(ap.N, ap.R1, ap.R2)
    T = rm.T

    def fn(t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, T)
        r = rm.r_of_t(t)
        return r ** (2 * (ap.N - 1)) * ap.q_at(r)

    hints = tuple(float(rm.h(r)) for r in ap.kink_hints if ap.R1 < r < ap.R2)
    w = WeightSpec.from_callable(fn, T, kink_hints=hints)
    try:
        p = ProblemSpec.build(w, ap.mu, 0.0, ap.g, boundary="neumann",
                              samples=_GRID_NODES)
    except PatternError:
        # sign-definite Q: the transformed problem still integrates, it
        # just has no hump structure to classify against
        p = ProblemSpec(w, None, ap.mu, 0.0, ap.g, boundary="neumann")
    return p, rm


def solution_to_radial(v, r_of_t, n=1024):
    """Radial profile samples (r, U(r)) from a 1D trajectory."""
    ts, us, _ = v.sample(n)
    rs = np.asarray(r_of_t(ts), dtype=float)
    return rs, us


def check_q_integral(ap):
    """int_{R1}^{R2} r^{N-1} Q_mu(r) dr; a negative value is the reduced
    form of the necessary sign condition on the annulus."""
    def f(r):
        q = float(ap.q_at(r))
        qmu = max(q, 0.0) - ap.mu * max(-q, 0.0)
        return r ** (ap.N - 1) * qmu

    pts = sorted({ap.R1, ap.R2} |
                 {r for r in ap.kink_hints if ap.R1 < r < ap.R2})
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = _sint.quad(f, a, b, limit=200, epsabs=1e-13, epsrel=1e-11)
        total += val
    return total


def direct_radial_integration(ap, U0, rtol=1e-10, atol=1e-12, dense_n=1024):
    """Reference second-order integration in the radial variable.

    Integrates U'' + ((N-1)/r) U' + Q_mu(r) g~(U) = 0 from U(R1) = U0,
    U'(R1) = 0 and returns samples (r, U).  Used to cross-check the 1D
    reduction; the extended field matches the 1D solver's convention.
    """
    from .nonlinearity import g_eval

    def qmu(r):
        q = float(ap.q_at(r))
        return max(q, 0.0) - ap.mu * max(-q, 0.0)

    def rhs(r, z):
        U, V = z
        force = qmu(r) * g_eval(ap.g, max(U, 0.0)) if U >= 0 else -U
        return [V, -(ap.N - 1) / r * V - force]

    from scipy.integrate import solve_ivp
    pts = sorted({ap.R1, ap.R2} |
                 {r for r in ap.kink_hints if ap.R1 < r < ap.R2})
    rs_all, us_all = [], []
    z = [float(U0), 0.0]
    for a, b in zip(pts[:-1], pts[1:]):
        sol = solve_ivp(rhs, (a, b), z, method="DOP853", rtol=rtol,
                        atol=atol, dense_output=True)
        if not sol.success:
            raise DomainError("radial reference integration failed")
        rs = np.linspace(a, b, max(16, int(dense_n * (b - a) /
                                           (ap.R2 - ap.R1))))
        rs_all.append(rs)
        us_all.append(sol.sol(rs)[0])
        z = sol.y[:, -1]
    return np.concatenate(rs_all), np.concatenate(us_all)


def find_radial_solutions(ap, sc=None):
    """Positive radial Neumann profiles via the 1D reduction.

    Returns (records, r_of_t); each record's trajectory lives in the
    transformed variable, use solution_to_radial for (r, U) samples.
    """
    from .shooting import find_neumann_solutions
    p, rm = radial_to_1d(ap)
    recs = find_neumann_solutions(p, sc)
    return recs, rm, p
