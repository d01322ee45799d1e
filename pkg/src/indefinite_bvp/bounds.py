"""Explicit constants behind the 2^m - 1 multiplicity threshold.

Every "choose any constant such that ..." step resolves deterministically:
the boundary value with a recorded safety factor (0.5 for the slope bound
at zero, 1.01 for mu_r, 10 for the a priori bound R*).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _sint
from scipy import optimize as _sopt

from .errors import DomainError, HypothesisError, PatternError
from .nonlinearity import eta as _eta
from .nonlinearity import gamma_min as _gamma_min
from .nonlinearity import gamma_ratio as _gamma_ratio
from .nonlinearity import limit_estimates
from .weight import integrate_weight, negative_part

ETA_SAFETY = 0.5
MU_R_SAFETY = 1.01
R_STAR_SAFETY = 10.0


@dataclass
class BoundsReport:
    """All explicit constants of the multiplicity estimate."""

    K: list
    K0: float
    r: float
    eta_r: float
    mu_sharp: float
    mu_r: float
    delta_plus: list
    delta_minus: list
    mu_plus: list
    mu_minus: list
    gamma_small: float   # min of g(s)/s on [r/2, r]
    gamma_big: float     # min of g on [r/4, R*]
    R_star: float
    mu_star: float
    provenance: dict = field(default_factory=dict)

    def validate(self):
        """Check the internal inequalities the construction guarantees."""
        if not self.eta_r * self.K0 < 1.0:
            raise DomainError("eta(r) * K0 must be < 1")
        if not self.mu_r > self.mu_sharp:
            raise DomainError("mu_r must exceed mu_sharp")
        if not (self.mu_star >= self.mu_r - 1e-15):
            raise DomainError("mu_star must dominate mu_r")
        for v in self.mu_plus + self.mu_minus:
            if self.mu_star < v - 1e-12 * abs(v):
                raise DomainError("mu_star must dominate every mu_plus/minus")
        if not (0.0 < self.r < self.R_star):
            raise DomainError("need 0 < r < R_star")
        return True

    def to_dict(self):
        return {
            "K": list(self.K), "K0": self.K0, "r": self.r,
            "eta_r": self.eta_r, "mu_sharp": self.mu_sharp,
            "mu_r": self.mu_r,
            "delta_plus": list(self.delta_plus),
            "delta_minus": list(self.delta_minus),
            "mu_plus": list(self.mu_plus), "mu_minus": list(self.mu_minus),
            "gamma_small": self.gamma_small, "gamma_big": self.gamma_big,
            "R_star": self.R_star, "mu_star": self.mu_star,
            "provenance": self.provenance,
        }


def _neg_cumulative(p, t_lo, t):
    """integral of a- over [t_lo, t] (t may exceed the period window)."""
    return integrate_weight(p.weight, t_lo, t, part="-", pattern=p.pattern)


def _neg_double_integral(p, lo, hi, from_left=True):
    """Iterated integral of a- over the triangle:

    from_left:  int_lo^hi int_lo^t a-(xi) dxi dt
    otherwise:  int_lo^hi int_t^hi a-(xi) dxi dt
    """
    if from_left:
        inner = lambda t: _neg_cumulative(p, lo, t) if t > lo else 0.0
    else:
        inner = lambda t: _neg_cumulative(p, t, hi) if t < hi else 0.0
    pts = [lo] + p.breakpoints_between(lo, hi) + [hi]
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = _sint.quad(inner, a, b, limit=100, epsabs=1e-13,
                            epsrel=1e-10)
        total += val
    return total


def compute_K(p):
    """Per-hump constants K_i and the combined constant K0."""
    pat = p.pattern
    K = []
    for (lo, hi) in pat.pos_intervals():
        norm = integrate_weight(p.weight, lo, hi, part="+", pattern=pat)
        K.append(norm * math.exp(abs(p.c) * (hi - lo)))
    K0 = 0.0
    for i, (lo, hi) in enumerate(pat.pos_intervals()):
        nlo, nhi = pat.neg_intervals()[i]
        len_pos = hi - lo
        len_neg = nhi - nlo
        K0 = max(K0, K[i] * (len_pos + math.exp(abs(p.c) * len_neg) * len_neg))
    return K, 2.0 * K0


def choose_r(g, K0, max_steps=200):
    """Largest r on the geometric grid 1, 1/2, 1/4, ... with
    eta(r) <= 0.5 / K0."""
    bound = ETA_SAFETY / K0
    g0, _ = limit_estimates(g)
    r = 1.0
    for _ in range(max_steps):
        e = _eta(g, r)
        if e <= bound:
            return r, e
        r *= 0.5
    raise HypothesisError(
        "no admissible r found: the slope of g at zero is too large "
        "(g0=%.6g, need eta(r) <= %.6g)" % (g0, bound))


def compute_mu_sharp(p):
    """Ratio of the period integrals of a+ and a-."""
    pat = p.pattern
    lo = pat.start
    hi = lo + pat.period
    ip = integrate_weight(p.weight, lo, hi, part="+", pattern=pat)
    im = integrate_weight(p.weight, lo, hi, part="-", pattern=pat)
    if im <= 0:
        raise PatternError("weight has no negative part: sign-definite")
    return ip / im


def compute_mu_r(p, r, K0=None, mu_sharp=None):
    """Threshold making the small ball degree argument work, with the 1.01
    safety factor and floored at 1.01 * mu_sharp."""
    pat = p.pattern
    if K0 is None:
        _, K0 = compute_K(p)
    if mu_sharp is None:
        mu_sharp = compute_mu_sharp(p)
    e = _eta(p.g, r)
    gam = _gamma_ratio(p.g, r)
    worst = 0.0
    for (nlo, nhi) in pat.neg_intervals():
        if nhi - nlo <= 0:
            continue  # degenerate trailing interval of a Neumann pattern
        dd = _neg_double_integral(p, nlo, nhi, from_left=True)
        if dd <= 0:
            raise PatternError(
                "negative part vanishes on [%g, %g]" % (nlo, nhi))
        worst = max(worst,
                    K0 * math.exp(abs(p.c) * (nhi - nlo)) * e / (gam * dd))
    return MU_R_SAFETY * max(worst, mu_sharp)


def compute_delta(p):
    """Per-hump window widths delta+_j (after tau_j) and delta-_j (before
    sigma_j) satisfying delta * e^{|c| delta} < |I+_j| / 2 and fitting in
    the adjacent negativity interval, shrunk until the negative part has
    positive mass on the window."""
    pat = p.pattern
    T = pat.period
    dplus, dminus = [], []

    def cap_from_transcendental(half_len):
        if p.c == 0:
            return half_len
        f = lambda d: d * math.exp(abs(p.c) * d) - half_len
        hi = half_len
        if f(hi) <= 0:
            return hi
        return _sopt.brentq(f, 0.0, hi, xtol=1e-14)

    def shrink_until_mass(lo_fn, d):
        for _ in range(60):
            if d <= 0:
                raise PatternError("cannot find a window with negative mass")
            lo, hi = lo_fn(d)
            if _neg_cumulative(p, lo, hi) > 0:
                return d
            d *= 0.5
        raise PatternError("cannot find a window with negative mass")

    for j in range(pat.m):
        plo, phi = pat.pos_intervals()[j]
        half = (phi - plo) / 2.0
        # window after tau_j inside I-_j
        gap_plus = pat.sigma[j + 1] - pat.tau[j]
        if gap_plus <= 0:
            if pat.mode == "neumann":
                dplus.append(math.nan)  # weight ends with positivity
            else:
                raise PatternError("no negativity interval after tau_%d" % j)
        else:
            d = min(cap_from_transcendental(half), gap_plus) * (1.0 - 1e-12)
            d = shrink_until_mass(lambda d: (pat.tau[j], pat.tau[j] + d), d)
            dplus.append(d)
        # window before sigma_j inside the preceding negativity interval
        if j == 0:
            gap_minus = pat.sigma[0] + T - pat.tau[-1] if pat.mode == "periodic" \
                else pat.sigma[0] - 0.0
        else:
            gap_minus = pat.sigma[j] - pat.tau[j - 1]
        if gap_minus <= 0:
            if pat.mode == "neumann":
                dminus.append(math.nan)  # weight starts with positivity
            else:
                raise PatternError("no negativity interval before sigma_%d" % j)
        else:
            d = min(cap_from_transcendental(half), gap_minus) * (1.0 - 1e-12)
            d = shrink_until_mass(lambda d: (pat.sigma[j] - d, pat.sigma[j]), d)
            dminus.append(d)
    return dplus, dminus


def estimate_R_star(p, r=None, search_config=None):
    """Numerical surrogate for the a priori bound R*: ten times the largest
    sup-norm among solutions found by a coarse multistart sweep (at the
    problem's mu and at a mu slightly above mu_sharp), floored at 10 r.

    The analytic R* of the existence proof is non-constructive; this value
    is an estimate and is flagged as such in the report provenance.
    """
    from . import shooting  # local import: shooting depends on this module

    _, ginf = limit_estimates(p.g)
    from .eigen import check_ginf_hypothesis
    check_ginf_hypothesis(p, ginf)

    if r is None:
        _, K0 = compute_K(p)
        r, _ = choose_r(p.g, K0)

    sc = search_config
    if sc is None:
        sc = shooting.SearchConfig(u_count=24, y_count=12, u_max=50.0,
                                   residual_tol=1e-6, rtol=1e-8, atol=1e-10,
                                   newton_max_iter=15, screen_steps=600)
    mu_sharp = compute_mu_sharp(p)
    sup = 0.0
    probes = {p.mu, mu_sharp * 1.05 + 1e-6}
    for mu in probes:
        q = type(p)(p.weight, p.pattern, mu, p.c, p.g, p.boundary)
        if p.boundary == "neumann":
            recs = shooting.find_neumann_solutions(q, sc)
        else:
            recs = shooting.find_periodic_solutions(q, 1, sc)
        for rec in recs:
            sup = max(sup, rec.sup_norm)
    return max(R_STAR_SAFETY * sup, R_STAR_SAFETY * r)


def compute_mu_star(p, search_config=None, R_star=None):
    """Full report: all constants plus the sufficient threshold mu*.

    ``R_star`` overrides the multistart estimate; pass it when solutions
    are already known (the estimate is ten times their largest sup-norm)
    or when comparing reports across k-fold rewritings of the weight.
    """
    K, K0 = compute_K(p)
    r, eta_r = choose_r(p.g, K0)
    mu_sharp = compute_mu_sharp(p)
    mu_r = compute_mu_r(p, r, K0=K0, mu_sharp=mu_sharp)
    if R_star is None:
        R_star = estimate_R_star(p, r=r, search_config=search_config)
    gamma_small = _gamma_ratio(p.g, r)
    gamma_big = _gamma_min(p.g, r, R_star)
    dplus, dminus = compute_delta(p)
    pat = p.pattern
    mu_plus, mu_minus = [], []
    for j in range(pat.m):
        dp = dplus[j]
        if math.isnan(dp):
            mu_plus.append(math.nan)
        else:
            dd = _neg_double_integral(p, pat.tau[j], pat.tau[j] + dp,
                                      from_left=True)
            mu_plus.append(R_star * math.exp(abs(p.c) * dp) / (gamma_big * dd))
        dm = dminus[j]
        if math.isnan(dm):
            mu_minus.append(math.nan)
        else:
            dd = _neg_double_integral(p, pat.sigma[j] - dm, pat.sigma[j],
                                      from_left=False)
            mu_minus.append(R_star * math.exp(abs(p.c) * dm) / (gamma_big * dd))
    mu_star = max([mu_r] + [v for v in mu_plus + mu_minus
                            if not math.isnan(v)])
    report = BoundsReport(
        K=K, K0=K0, r=r, eta_r=eta_r, mu_sharp=mu_sharp, mu_r=mu_r,
        delta_plus=dplus, delta_minus=dminus,
        mu_plus=mu_plus, mu_minus=mu_minus,
        gamma_small=gamma_small, gamma_big=gamma_big,
        R_star=R_star, mu_star=mu_star,
        provenance={
            "eta_safety": ETA_SAFETY,
            "mu_r_safety": MU_R_SAFETY,
            "R_star_safety": R_STAR_SAFETY,
            "R_star_note": "estimate from multistart solution sweep",
            "mu_star_note": "sufficient threshold, not necessary",
        })
    report.validate()
    return report
