"""Nonlinearities g: R+ -> R+ vanishing at 0, and the growth functionals
used by the explicit constants of the multiplicity estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as _sopt

from .errors import ConfigurationError, DomainError, HypothesisError
from .expressions import Expression

_GRID = 4096
_REFINE_ROUNDS = 3


@dataclass(frozen=True)
class NonlinearitySpec:
    """g(s) for s >= 0 with g(0) = 0 and g(s) > 0 for s > 0.

    ``kind`` is one of "power", "arctan_scaled", "clamped_expression",
    "expression".  ``declared_g0`` / ``declared_ginf`` override the numeric
    limit estimates when the caller knows the analytic values.
    """

    kind: str
    params: tuple = ()
    fn: object = None
    declared_g0: float = None
    declared_ginf: float = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def power(cls, p):
        if not p > 1:
            raise ConfigurationError("power kind needs exponent p > 1")
        return cls("power", (float(p),))

    @classmethod
    def arctan_scaled(cls, nu):
        """g(s) = nu * s * arctan(s)."""
        if not nu > 0:
            raise ConfigurationError("arctan_scaled needs nu > 0")
        return cls("arctan_scaled", (float(nu),))

    @classmethod
    def from_expression(cls, src, clamp=False):
        expr = src if isinstance(src, Expression) else Expression(src)
        if expr.variable not in (None, "s"):
            raise ConfigurationError(
                "nonlinearity expressions use the variable s")
        kind = "clamped_expression" if clamp else "expression"
        return cls(kind, (expr.source,), fn=expr)

    @classmethod
    def from_callable(cls, fn, declared_g0=None, declared_ginf=None):
        return cls("callable", (), fn=fn, declared_g0=declared_g0,
                   declared_ginf=declared_ginf)

    def validate(self, samples=256, s_max=100.0):
        """Spot check g(0) = 0 and g > 0 on sampled s > 0."""
        if g_eval(self, 0.0) != 0.0:
            raise HypothesisError("g(0) must be 0")
        ss = np.geomspace(1e-8, s_max, samples)
        if np.any(g_eval(self, ss) <= 0):
            raise HypothesisError("g must be positive for s > 0")


def g_eval(g, s):
    """Evaluate g(s) for s >= 0 (vectorized)."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise DomainError("g is defined for s >= 0 only")
    if g.kind == "power":
        out = s_arr ** g.params[0]
    elif g.kind == "arctan_scaled":
        out = g.params[0] * s_arr * np.arctan(s_arr)
    elif g.kind == "clamped_expression":
        out = np.maximum(np.asarray(g.fn(s_arr), dtype=float), 0.0)
    else:
        out = np.asarray(g.fn(s_arr), dtype=float)
    out = np.where(s_arr == 0.0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def _ratio(g, s):
    return g_eval(g, s) / np.asarray(s, dtype=float)


def _grid_extremum(f, lo, hi, minimize, log=True):
    """Grid scan with a few rounds of local refinement."""
    if log:
        grid = np.geomspace(lo, hi, _GRID)
    else:
        grid = np.linspace(lo, hi, _GRID)
    for _ in range(_REFINE_ROUNDS):
        vals = f(grid)
        idx = int(np.argmin(vals) if minimize else np.argmax(vals))
        best_x = grid[idx]
        best_v = vals[idx]
        left = grid[max(idx - 1, 0)]
        right = grid[min(idx + 1, len(grid) - 1)]
        if right <= left:
            break
        grid = np.linspace(left, right, 64)
    # local polish
    sign = 1.0 if minimize else -1.0
    res = _sopt.minimize_scalar(lambda x: sign * f(np.array([x]))[0],
                                bounds=(left, right), method="bounded",
                                options={"xatol": 1e-14})
    if sign * res.fun < sign * best_v:
        best_v = sign * res.fun
    return float(best_v)


def eta(g, r):
    """sup of g(s)/s over (0, r]."""
    if not r > 0:
        raise DomainError("r must be positive")
    if g.kind == "power":
        return r ** (g.params[0] - 1.0)
    if g.kind == "arctan_scaled":
        return g.params[0] * math.atan(r)
    return _grid_extremum(lambda s: _ratio(g, s), r * 1e-12, r,
                          minimize=False)


def gamma_ratio(g, r):
    """min of g(s)/s over [r/2, r]."""
    if not r > 0:
        raise DomainError("r must be positive")
    if g.kind == "power":
        return (r / 2.0) ** (g.params[0] - 1.0)
    if g.kind == "arctan_scaled":
        return g.params[0] * math.atan(r / 2.0)
    return _grid_extremum(lambda s: _ratio(g, s), r / 2.0, r, minimize=True,
                          log=False)


def gamma_min(g, r, r_star):
    """Positive minimum of g over [r/4, R*]."""
    if not (0 < r / 4.0 < r_star):
        raise DomainError("need 0 < r/4 < R*")
    if g.kind == "power":
        val = (r / 4.0) ** g.params[0]
    elif g.kind == "arctan_scaled":
        s = r / 4.0
        val = g.params[0] * s * math.atan(s)
    else:
        val = _grid_extremum(lambda s: g_eval(g, s), r / 4.0, r_star,
                             minimize=True)
    if not val > 0:
        raise HypothesisError("g attains a non-positive value on [r/4, R*]")
    return val


def limit_estimates(g):
    """(g0, ginf): limsup of g(s)/s at 0+ and liminf at +infinity.

    Exact for the analytic kinds; grid estimates otherwise (the infinity
    estimate is the minimum of the ratio over s in [1e3, 1e6], a liminf
    proxy flagged by callers as an estimate).
    """
    if g.kind == "power":
        return 0.0, math.inf
    if g.kind == "arctan_scaled":
        return 0.0, g.params[0] * math.pi / 2.0
    g0 = g.declared_g0
    ginf = g.declared_ginf
    if g0 is None:
        ss = np.geomspace(1e-9, 1e-3, 512)
        g0 = float(np.max(_ratio(g, ss)))
    if ginf is None:
        ss = np.geomspace(1e3, 1e6, 512)
        ginf = float(np.min(_ratio(g, ss)))
    return g0, ginf
