"""Multistart shooting for periodic and Neumann solutions.

The search screens a grid of initial states with a fast vectorized
fixed-step integrator (steps split at weight breakpoints), then polishes
promising starts with damped Newton iterations on the displacement map of
the accurate adaptive integrator.  Accepted solutions are classified by
the binary code of their hump maxima and cross-checked by an independent
verification pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate as _sint
from scipy import optimize as _sopt

from .errors import (DegreeUndefinedError, DivergenceError, DomainError,
                     SolverError, UnclassifiableError)
from .integrator import (BLOWUP_NORM, State, Trajectory, flow, integrate,
                         max_on_interval, min_on_interval)
from .nonlinearity import g_eval
from .weight import k_fold_pattern


@dataclass(frozen=True)
class SearchConfig:
    """Grids and tolerances for the multistart searches."""

    u_min: float = 1e-4
    u_max: float = 10.0
    u_count: int = 48
    y_min: float = -5.0
    y_max: float = 5.0
    y_count: int = 32
    y_scale: float = 1.0
    dedup_tol: float = 1e-6
    newton_max_iter: int = 30
    residual_tol: float = 1e-8
    fd_step: float = 1e-7
    rtol: float = 1e-10
    atol: float = 1e-12
    screen_steps: int = 1200      # fixed steps per unit time in the screen
    max_candidates: int = 60
    trivial_tol: float = 1e-3     # sup-norm below which a root is trivial
    small_scale: float = 0.05     # shrink factor for coded orbit seeds

    def __post_init__(self):
        if self.u_count <= 0 or self.y_count <= 0:
            raise DomainError("grid counts must be positive")
        if self.dedup_tol <= 0 or self.residual_tol <= 0:
            raise DomainError("tolerances must be positive")


@dataclass
class SolutionRecord:
    """A solution found by shooting."""

    initial: State
    k: int
    trajectory: Trajectory
    residual: float
    positive: bool
    sup_norm: float
    boundary: str
    code: tuple = None
    min_period_multiple: int = None
    neg_below_r: bool = None
    unclassifiable: bool = False
    node_states: object = None    # multiple-shooting states, one per segment
    nodes: object = None          # matching times the node states live on

    @property
    def code_string(self):
        if self.code is None:
            return None
        return "".join(str(b) for b in self.code)


# ---------------------------------------------------------------------------
# fast vectorized screening integrator


def _forcing_vec(p, t, u):
    amu = p.a_mu_at(t)
    pos = np.maximum(u, 0.0)
    with np.errstate(all="ignore"):
        gval = g_eval(p.g, np.where(np.isfinite(pos), pos, 0.0))
        return np.where(u >= 0.0, amu * gval, -u)


def screen_flow(p, states, t0, t1, steps_per_unit=1200):
    """Terminal states of a batch of initial states via fixed-step RK4.

    Diverged members are frozen at NaN.  Accuracy is qualitative; this is
    only used to locate candidate basins for the Newton polish.
    """
    u = states[:, 0].astype(float).copy()
    y = states[:, 1].astype(float).copy()
    edges = [t0] + p.breakpoints_between(t0, t1) + [t1]

    def deriv(t, u, y):
        du = y
        dy = -p.c * y - _forcing_vec(p, t, u)
        return du, dy

    with np.errstate(all="ignore"):
        for lo, hi in zip(edges[:-1], edges[1:]):
            n = max(4, int(math.ceil((hi - lo) * steps_per_unit)))
            h = (hi - lo) / n
            t = lo
            for _ in range(n):
                k1u, k1y = deriv(t, u, y)
                k2u, k2y = deriv(t + h / 2, u + h / 2 * k1u, y + h / 2 * k1y)
                k3u, k3y = deriv(t + h / 2, u + h / 2 * k2u, y + h / 2 * k2y)
                k4u, k4y = deriv(t + h, u + h * k3u, y + h * k3y)
                u = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
                y = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
                t += h
                dead = ~np.isfinite(u) | ~np.isfinite(y) | \
                    (np.abs(u) + np.abs(y) > BLOWUP_NORM)
                u[dead] = np.nan
                y[dead] = np.nan
    return np.column_stack([u, y])


# ---------------------------------------------------------------------------
# accurate maps


def poincare_map(p, s0, k=1, rtol=None, atol=None, sc=None):
    """State at time k*T starting from s0 at the pattern origin."""
    if k < 1:
        raise DomainError("k must be >= 1")
    rtol = rtol if rtol is not None else (sc.rtol if sc else 1e-10)
    atol = atol if atol is not None else (sc.atol if sc else 1e-12)
    t0 = p.pattern.start if p.pattern is not None else 0.0
    return flow(p, s0, (t0, t0 + k * p.period), rtol=rtol, atol=atol)


def _displacement(p, s, k, sc):
    img = poincare_map(p, State(s[0], s[1]), k, sc=sc)
    return np.array([img.u - s[0], img.y - s[1]])


def _period_map(p, s, sc):
    img = poincare_map(p, State(float(s[0]), float(s[1])), 1, sc=sc)
    return np.array([img.u, img.y])


_GROWTH_CAP = 7.0


def _g_slope(g, amp):
    amp = min(max(float(amp), 1e-3), 100.0)
    eps = 1e-6 * (1.0 + amp)
    return max(1.0, (g_eval(g, amp + eps) - g_eval(g, amp)) / eps)


def _segment_nodes(p, k, amp=1.0, traj=None):
    """Matching times for multiple shooting over [t0, t0 + kT].

    Every weight breakpoint is a node, and each smooth piece is further
    subdivided so the local exponential rate sqrt(max |a_mu| g'(u))
    times the segment length stays below a fixed cap; without this the
    flow across a negativity interval at large mu expands beyond double
    precision and Newton cannot converge.  The amplitude entering g' is
    the maximum of |u| over the piece along ``traj`` when given (deep
    troughs then stay cheap), else the uniform scale ``amp``.
    """
    t0 = p.pattern.start if p.pattern is not None else 0.0
    t1 = t0 + k * p.period
    base = [t0] + p.breakpoints_between(t0, t1) + [t1]
    nodes = [t0]
    for lo, hi in zip(base[:-1], base[1:]):
        ts = np.linspace(lo, hi, 33)
        amax = float(np.max(np.abs(p.a_mu_at(ts))))
        if traj is not None:
            lo_s, hi_s = traj.span
            a_loc = float(np.max(np.abs(
                traj.eval(np.clip(ts, lo_s, hi_s))[:, 0])))
        else:
            a_loc = amp
        rate = math.sqrt(max(amax * _g_slope(p.g, a_loc), 1.0))
        n = max(1, int(math.ceil((hi - lo) * rate / _GROWTH_CAP)))
        nodes.extend(np.linspace(lo, hi, n + 1)[1:].tolist())
    return nodes


def _flow_seg(p, s, ta, tb, sc):
    img = flow(p, State(float(s[0]), float(s[1])), (ta, tb),
               rtol=sc.rtol, atol=sc.atol)
    return np.array([img.u, img.y])


def _batch_flow(p, Z, t0s, lens, sc):
    """Endpoint states of many independent segment flows in one call.

    Row j of Z is integrated from t0s[j] over length lens[j]; all rows
    advance together in the normalized time s in [0, 1].  No segment may
    contain a weight breakpoint.  The shared error norm averages over
    rows, so the tolerances are tightened by sqrt(rows) to keep the
    per-segment accuracy of the scalar path.
    """
    Z = np.asarray(Z, dtype=float)
    m = len(Z)
    t0s = np.asarray(t0s, dtype=float)
    lens = np.asarray(lens, dtype=float)

    def rhs(s, y):
        Y = y.reshape(m, 2)
        t = t0s + s * lens
        u = Y[:, 0]
        v = Y[:, 1]
        force = p.forcing(t, u)
        out = np.empty_like(Y)
        out[:, 0] = v * lens
        out[:, 1] = (-p.c * v - force) * lens
        return out.ravel()

    def blowup(s, y):
        return BLOWUP_NORM - float(np.max(np.abs(y)))

    blowup.terminal = True
    scale = 1.0 / math.sqrt(m)
    sol = _sint.solve_ivp(rhs, (0.0, 1.0), Z.ravel(), method="DOP853",
                          rtol=max(sc.rtol * scale, 1e-13),
                          atol=sc.atol * scale, events=blowup)
    if not sol.success or sol.t[-1] < 1.0 or \
            not np.all(np.isfinite(sol.y[:, -1])):
        raise DivergenceError("batched segment integration failed")
    return sol.y[:, -1].reshape(m, 2)


def _orbit_seed(p, s0, k, sc):
    """(node states, nodes) propagated from s0, or None on escape.

    The whole window is integrated once; the orbit's own amplitude sets
    the matching grid so strongly forced stretches get enough nodes.
    """
    t0 = p.pattern.start if p.pattern is not None else 0.0
    try:
        traj = integrate(p, State(float(s0[0]), float(s0[1])),
                         t0, t0 + k * p.period, rtol=sc.rtol, atol=sc.atol)
    except DivergenceError:
        return None
    nodes = _segment_nodes(p, k, traj=traj)
    return traj.eval(np.array(nodes[:-1])), nodes


def _newton_polish(p, z0, k, sc, nodes=None):
    """Damped multiple-shooting Newton with matching at every breakpoint.

    The unknowns are the states z_j at the matching nodes; the residual is
    F_j = flow(z_j over segment j) - z_{j+1 mod n}.  Fine segmentation
    keeps every segment flow mildly expanding even when the full period
    map is violently stretching (large mu).  ``nodes`` must be the grid
    the seed was built on; it defaults to the unit-amplitude grid.
    Returns (node states of shape (n, 2) with the first row at the
    pattern start, largest per-segment matching defect) or None.
    """
    if nodes is None:
        nodes = _segment_nodes(p, k)
    n = len(nodes) - 1
    z = np.asarray(z0, dtype=float).reshape(n, 2).copy()
    t0s = np.asarray(nodes[:-1])
    lens = np.diff(nodes)

    def residual(z):
        fz = _batch_flow(p, z, t0s, lens, sc)
        return fz, fz - np.roll(z, -1, axis=0)

    def assemble(z, fz):
        hs = sc.fd_step * (1.0 + np.abs(z))        # (n, 2)
        pert = np.repeat(z, 2, axis=0)             # rows (j,0), (j,1)
        pert[0::2, 0] += hs[:, 0]
        pert[1::2, 1] += hs[:, 1]
        fp = _batch_flow(p, pert, np.repeat(t0s, 2), np.repeat(lens, 2), sc)
        jac = np.zeros((2 * n, 2 * n))
        for j in range(n):
            jac[2 * j:2 * j + 2, 2 * j] = \
                (fp[2 * j] - fz[j]) / hs[j, 0]
            jac[2 * j:2 * j + 2, 2 * j + 1] = \
                (fp[2 * j + 1] - fz[j]) / hs[j, 1]
            nxt = (j + 1) % n
            jac[2 * j:2 * j + 2, 2 * nxt:2 * nxt + 2] -= np.eye(2)
        return jac

    try:
        fz, f = residual(z)
    except DivergenceError:
        return None
    bound = 100.0 * (1.0 + float(np.max(np.abs(z))))
    best = math.inf
    stall = 0
    jac = None
    jac_age = 0
    for _ in range(sc.newton_max_iter):
        nf = float(np.linalg.norm(f))
        # converged when every segment defect is small; the summed norm
        # grows with the node count and would gate on integrator noise
        defect = float(np.max(np.linalg.norm(f, axis=1)))
        if defect < sc.residual_tol:
            return z, defect
        if float(np.max(np.abs(z))) > bound:
            return None
        if nf < 0.5 * best:
            best, stall = nf, 0
        else:
            stall += 1
            if stall >= 10:
                return None
        try:
            # the Jacobian is frozen across full steps; damped or stalled
            # progress triggers a fresh assembly
            if jac is None or jac_age >= 4:
                jac = assemble(z, fz)
                jac_age = 0
            step = np.linalg.solve(jac, -f.ravel()).reshape(n, 2)
        except (DivergenceError, np.linalg.LinAlgError):
            return None
        lam = 1.0
        for _ in range(12):
            try:
                fz_new, f_new = residual(z + lam * step)
            except DivergenceError:
                lam *= 0.5
                continue
            if np.linalg.norm(f_new) < nf:
                break
            lam *= 0.5
        else:
            if jac_age > 0:
                jac = None
                continue
            return None
        z = z + lam * step
        fz, f = fz_new, f_new
        jac_age += 1
        if lam < 0.5:
            jac = None
    defect = float(np.max(np.linalg.norm(f, axis=1)))
    if defect < sc.residual_tol:
        return z, defect
    return None


# ---------------------------------------------------------------------------
# record assembly, dedup, searches


def _stitched_trajectory(p, z, nodes, sc):
    """Trajectory assembled segment by segment from the matching states.

    Restarting each segment on its own node state keeps the later humps
    accurate even when the full-window flow amplifies the node error.
    """
    times, states, segments = [], [], []
    for j in range(len(nodes) - 1):
        traj = integrate(p, State(float(z[j, 0]), float(z[j, 1])),
                         nodes[j], nodes[j + 1], rtol=sc.rtol, atol=sc.atol)
        drop = 1 if times else 0
        times.extend(traj.times[drop:])
        states.extend(traj.states[drop:])
        segments.extend(traj.segments)
    return Trajectory(times, states, segments, list(nodes[1:-1]))


def _make_record(p, s, k, residual, sc, boundary, z=None, nodes=None):
    t0 = p.pattern.start if p.pattern is not None else 0.0
    if z is not None:
        traj = _stitched_trajectory(p, z, nodes, sc)
    else:
        traj = integrate(p, s, t0, t0 + k * p.period,
                         rtol=sc.rtol, atol=sc.atol)
    n = max(1024, 256 * k)
    sup = traj.sup_norm(n)
    positive = traj.min_u(n) > 0.0
    return SolutionRecord(initial=s, k=k, trajectory=traj, residual=residual,
                          positive=positive, sup_norm=sup, boundary=boundary,
                          node_states=z, nodes=None if z is None
                          else list(nodes))


def _dedup(records, sc, scale):
    records = sorted(records, key=lambda r: (r.initial.u, r.initial.y))
    kept = []
    tol = sc.dedup_tol * (1.0 + scale)
    for rec in records:
        dup = False
        for other in kept:
            dist = math.hypot(rec.initial.u - other.initial.u,
                              rec.initial.y - other.initial.y)
            ts = np.linspace(*rec.trajectory.span, 257)
            du = rec.trajectory.eval(ts)[:, 0] - other.trajectory.eval(ts)[:, 0]
            # same initial state alone is not enough: coded orbits at
            # large mu separate only after a deep negativity trough, so
            # the whole trajectories must agree
            if dist < tol and \
                    float(np.max(np.abs(du))) < 1e-6 * (1.0 + rec.sup_norm):
                dup = True
                break
        if not dup:
            kept.append(rec)
    return kept


def _local_refine(p, center, span_u, span_y, k, sc, rounds=5):
    """Shrink toward a displacement zero with nested screening grids.

    Around ``center`` a 9x9 grid spanning +-span is screened with the fast
    integrator; the minimizer becomes the next center and the spans halve.
    This walks coarse grid candidates into the Newton basin cheaply.
    """
    t0 = p.pattern.start if p.pattern is not None else 0.0
    c = np.asarray(center, dtype=float)
    for _ in range(rounds):
        us = np.clip(c[0] + np.linspace(-span_u, span_u, 9), 1e-10, None)
        ys = c[1] + np.linspace(-span_y, span_y, 9)
        uu, yy = np.meshgrid(us, ys, indexing="ij")
        starts = np.column_stack([uu.ravel(), yy.ravel()])
        finals = screen_flow(p, starts, t0, t0 + k * p.period,
                             steps_per_unit=sc.screen_steps)
        mags = np.hypot(*(finals - starts).T)
        mags = np.where(np.isfinite(mags), mags, np.inf)
        best = int(np.argmin(mags))
        if not np.isfinite(mags[best]):
            return c
        c = starts[best]
        span_u /= 4.0
        span_y /= 4.0
    return c


def _grid_candidates(mags, shape):
    """Indices of local minima of |D| on the screening grid."""
    m = mags.reshape(shape)
    m = np.where(np.isfinite(m), m, np.inf)
    best = np.ones(shape, dtype=bool)
    for axis in (0, 1):
        for shift in (1, -1):
            rolled = np.roll(m, shift, axis=axis)
            if shift == 1:
                idx = [slice(None)] * 2
                idx[axis] = 0
                rolled[tuple(idx)] = np.inf
            else:
                idx = [slice(None)] * 2
                idx[axis] = -1
                rolled[tuple(idx)] = np.inf
            best &= m <= rolled
    best &= np.isfinite(m)
    return np.flatnonzero(best.reshape(-1))


def _coded_orbit_seeds(p, k, sc, base=None):
    """Node seeds for the k-th iterate built from 1-periodic solutions.

    Every binary word of length k (except the all-zero word) selects per
    period either the node states of a 1-periodic solution or their
    shrunken copies; these sit near the coded subharmonic orbits of the
    coexistence dynamics.
    """
    if k < 2 or 2 ** k > 128:
        return []
    if base is None:
        base_sc = replace(sc, max_candidates=min(sc.max_candidates, 20))
        base = find_periodic_solutions(p, 1, base_sc)
    seeds = []
    t0 = p.pattern.start
    T = p.period
    for rec in base:
        nodes1 = _segment_nodes(p, 1, traj=rec.trajectory)
        # tile the 1-period grid so the word blocks line up exactly
        nodes_k = [t0 + j * T + (t - t0)
                   for j in range(k) for t in nodes1[:-1]] + [t0 + k * T]
        big = rec.trajectory.eval(np.array(nodes1[:-1]))
        small = sc.small_scale * big
        for word in range(1, 2 ** k):
            bits = [(word >> (k - 1 - j)) & 1 for j in range(k)]
            seeds.append((np.vstack([big if b else small for b in bits]),
                          nodes_k))
    return seeds


def find_periodic_solutions(p, k, sc=None, seeds=(), base=None, screen=True):
    """Positive kT-periodic solutions by multistart damped multiple
    shooting on the period map, sorted by initial displacement.

    ``seeds`` adds explicit initial states or node-state arrays; ``base``
    supplies known 1-periodic records for the coded subharmonic seeding
    (found by a k=1 search when omitted); ``screen=False`` skips the grid
    screening stage and polishes only the supplied and coded seeds, which
    is the right mode after continuation to extreme parameter values.
    """
    if p.boundary != "periodic":
        raise DomainError("problem is not in periodic mode")
    sc = sc or SearchConfig()
    t0 = p.pattern.start
    orbit_seeds = []
    if screen:
        u_grid = np.geomspace(sc.u_min, sc.u_max, sc.u_count)
        y_grid = np.linspace(sc.y_min * sc.y_scale, sc.y_max * sc.y_scale,
                             sc.y_count)
        uu, yy = np.meshgrid(u_grid, y_grid, indexing="ij")
        starts = np.column_stack([uu.ravel(), yy.ravel()])
        finals = screen_flow(p, starts, t0, t0 + k * p.period,
                             steps_per_unit=sc.screen_steps)
        disp = finals - starts
        mags = np.hypot(disp[:, 0], disp[:, 1])
        cand_idx = list(_grid_candidates(mags, (sc.u_count, sc.y_count)))
        finite = np.flatnonzero(np.isfinite(mags))
        extra = finite[np.argsort(mags[finite])][:sc.max_candidates]
        seen = set(cand_idx)
        cand_idx.extend(i for i in extra if i not in seen)
        cand_idx.sort(key=lambda i: mags[i])
        du = np.median(np.diff(u_grid)) if len(u_grid) > 1 else 0.1
        dy = y_grid[1] - y_grid[0] if len(y_grid) > 1 else 0.1
        points = [_local_refine(p, starts[i], du, dy, k, sc, rounds=3)
                  for i in cand_idx[:sc.max_candidates]]
        # refined candidates pile up near attracting roots; keep one per
        # cluster
        unique_pts = []
        for q in points:
            if all(np.hypot(*(q - o)) > 1e-4 * (1.0 + sc.u_max)
                   for o in unique_pts):
                unique_pts.append(q)
        orbit_seeds.extend(
            zn for zn in (_orbit_seed(p, q, k, sc) for q in unique_pts)
            if zn is not None)
    default_nodes = _segment_nodes(p, k)
    for s in seeds:
        s = np.asarray(s, dtype=float)
        if s.ndim == 1:
            zn = _orbit_seed(p, s, k, sc)
            if zn is not None:
                orbit_seeds.append(zn)
        else:
            orbit_seeds.append((s.reshape(len(default_nodes) - 1, 2),
                                default_nodes))
    orbit_seeds.extend(_coded_orbit_seeds(p, k, sc, base=base))

    found = []
    for z0, nodes in orbit_seeds:
        polished = _newton_polish(p, z0, k, sc, nodes=nodes)
        if polished is None:
            continue
        z, defect = polished
        s = State(float(z[0, 0]), float(z[0, 1]))
        try:
            rec = _make_record(p, s, k, defect, sc, "periodic",
                               z=z, nodes=nodes)
        except DivergenceError:
            continue
        if rec.residual > sc.residual_tol:
            continue
        if rec.sup_norm < sc.trivial_tol or not rec.positive:
            continue
        found.append(rec)
    return _dedup(found, sc, sc.u_max)


def find_neumann_solutions(p, sc=None):
    """Positive solutions with u'(0) = u'(T) = 0 by a 1D sweep in the
    initial displacement, bracketing sign changes of the terminal slope."""
    if p.boundary != "neumann":
        raise DomainError("problem is not in neumann mode")
    sc = sc or SearchConfig()
    T = p.period
    u_grid = np.linspace(sc.u_min, sc.u_max, sc.u_count)
    starts = np.column_stack([u_grid, np.zeros_like(u_grid)])
    finals = screen_flow(p, starts, 0.0, T, steps_per_unit=sc.screen_steps)
    yT = finals[:, 1]

    def terminal_slope(u0):
        return flow(p, State(float(u0), 0.0), (0.0, T),
                    rtol=sc.rtol, atol=sc.atol).y

    found = []
    for i in range(len(u_grid) - 1):
        if not (np.isfinite(yT[i]) and np.isfinite(yT[i + 1])):
            continue
        if yT[i] == 0.0 or yT[i] * yT[i + 1] >= 0.0:
            continue
        try:
            u_root = _sopt.brentq(terminal_slope, u_grid[i], u_grid[i + 1],
                                  xtol=1e-14, rtol=8.9e-16)
            residual = abs(terminal_slope(u_root))
        except (ValueError, DivergenceError):
            continue
        if residual > sc.residual_tol:
            continue
        rec = _make_record(p, State(float(u_root), 0.0), 1, residual, sc,
                           "neumann")
        if not rec.positive:
            continue
        found.append(rec)
    return _dedup(found, sc, sc.u_max)


# ---------------------------------------------------------------------------
# classification


def _humps_for(p, k):
    if p.pattern.mode == "periodic":
        return k_fold_pattern(p.pattern, k)
    return p.pattern


def classify_code(rec, p, r, R, margin=1e-6):
    """Binary code of the solution: bit i is 1 when the maximum of u over
    positivity interval i lies in (r, R), 0 when it is below r.

    Raises UnclassifiableError when a hump maximum sits within the relative
    ``margin`` of r, or at/above R.  Also records whether the maxima over
    the negativity intervals stay below r (the a posteriori property).
    """
    if not rec.positive:
        raise DomainError("only positive solutions are classified")
    if not 0 < r < R:
        raise DomainError("need 0 < r < R")
    pat = _humps_for(p, rec.k)
    bits = []
    for (lo, hi) in pat.pos_intervals():
        _, umax = max_on_interval(rec.trajectory, lo, hi)
        if abs(umax - r) < margin * (1.0 + r):
            raise UnclassifiableError(
                "hump maximum %.8g sits on the classification level r=%.8g"
                % (umax, r))
        if umax >= R * (1.0 - margin):
            raise UnclassifiableError(
                "hump maximum %.8g reaches the upper level R=%.8g" % (umax, R))
        bits.append(1 if umax > r else 0)
    neg_ok = True
    for (lo, hi) in pat.neg_intervals():
        if hi <= lo:
            continue
        _, umax = max_on_interval(rec.trajectory, lo, hi)
        if umax >= r:
            neg_ok = False
    rec.code = tuple(bits)
    rec.neg_below_r = neg_ok
    return rec.code


def track_in_mu(p, rec, mu_target, sc=None, max_steps=200):
    """Continue a periodic record along the weight scaling mu.

    Natural-parameter continuation with a multiplicative step in mu:
    polish the current node states at the trial mu, halve the step on
    failure or on collapse to the trivial solution.  Returns the record
    at mu_target, or None when the branch cannot be followed.
    """
    sc = sc or SearchConfig()
    if rec.boundary != "periodic":
        raise DomainError("continuation tracks periodic records")
    k = rec.k
    z, nodes_cur = rec.node_states, rec.nodes
    if z is None:
        zn = _orbit_seed(p, np.array([rec.initial.u, rec.initial.y]), k, sc)
        if zn is None:
            return None
        z, nodes_cur = zn
    mu = p.mu
    if mu_target == mu:
        return rec
    up = mu_target > mu
    factor = 1.5 if up else 1.0 / 1.5
    scale_ref = float(np.max(np.abs(z)))
    p_cur = replace(p, mu=mu)
    traj_cur = None     # stitched orbit at mu, for resampling node states
    mu_prev, traj_prev = None, None
    for _ in range(max_steps):
        mu_try = mu * factor
        if (up and mu_try >= mu_target) or (not up and mu_try <= mu_target):
            mu_try = mu_target
        q = replace(p, mu=mu_try)
        try:
            if traj_cur is None:
                traj_cur = _stitched_trajectory(p_cur, z, nodes_cur, sc)
            nodes_try = _segment_nodes(q, k, traj=traj_cur)
            ts = np.array(nodes_try[:-1])
            z_c = traj_cur.eval(ts)
            if traj_prev is not None:
                # secant prediction along the branch, linear in log mu
                s_ratio = (math.log(mu_try / mu)
                           / math.log(mu / mu_prev))
                z_seed = z_c + (z_c - traj_prev.eval(ts)) * s_ratio
            else:
                z_seed = z_c
            polished = _newton_polish(q, z_seed, k, sc, nodes=nodes_try)
        except DivergenceError:
            polished = None
        if polished is not None:
            z_new, defect = polished
            if float(np.max(np.abs(z_new))) <= max(sc.trivial_tol,
                                                   1e-3 * scale_ref):
                polished = None
        if polished is None:
            factor = math.sqrt(factor)
            if abs(factor - 1.0) < 1e-4:
                return None
            continue
        mu_prev, traj_prev = mu, traj_cur
        mu, z = mu_try, z_new
        p_cur, nodes_cur, traj_cur = q, nodes_try, None
        if up:
            factor = min(factor ** 1.5, 4.0)
        else:
            factor = max(factor ** 1.5, 0.25)
        if mu == mu_target:
            s = State(float(z[0, 0]), float(z[0, 1]))
            out = _make_record(q, s, k, defect, sc, "periodic",
                               z=z, nodes=nodes_try)
            return out if out.positive else None
    return None


def coded_multiplicity(p, k, mu_target, sc=None, base=None):
    """Coded kT-periodic solutions at a large weight scaling mu_target.

    Finds (or takes via ``base``) the 1-periodic solutions at the
    problem's own mu, continues one branch to mu_target, then polishes a
    coded seed for every nonzero binary word of length k there.  The
    direct grid search is useless at extreme mu (the period map stretches
    beyond screening resolution), which is why the search is staged this
    way.  Returns (records, problem at mu_target).
    """
    sc = sc or SearchConfig()
    if base is None:
        base = find_periodic_solutions(p, 1, sc)
    if not base:
        raise SolverError("no 1-periodic solution to continue from")
    rec = max(base, key=lambda r: r.sup_norm)
    hi = track_in_mu(p, rec, mu_target, sc)
    if hi is None:
        raise SolverError("continuation to mu=%g lost the branch"
                          % mu_target)
    q = replace(p, mu=mu_target)
    recs = find_periodic_solutions(q, k, sc, base=[hi], screen=False)
    return recs, q


def adaptive_levels(records, p, gap_factor=1.5, R_factor=10.0):
    """Classification levels (r, R) inferred from a family of solutions.

    Collects the hump maxima of all records and splits them at the largest
    multiplicative gap exceeding ``gap_factor``; r is the geometric mean of
    the gap edges.  With no such gap every hump counts as large and r sits
    below the smallest maximum.  R is ``R_factor`` times the largest.
    """
    maxima = []
    for rec in records:
        pat = _humps_for(p, rec.k)
        for (lo, hi) in pat.pos_intervals():
            _, umax = max_on_interval(rec.trajectory, lo, hi)
            maxima.append(umax)
    if not maxima:
        raise DomainError("no solutions to infer levels from")
    vals = np.sort(np.asarray(maxima))
    vals = vals[vals > 0]
    if vals.size == 0:
        raise DomainError("all hump maxima vanish")
    R = R_factor * float(vals[-1])
    if vals.size == 1:
        return float(vals[0]) / gap_factor, R
    ratios = vals[1:] / vals[:-1]
    i = int(np.argmax(ratios))
    if ratios[i] > gap_factor:
        r = float(np.sqrt(vals[i] * vals[i + 1]))
    else:
        r = float(vals[0]) / gap_factor
    return r, R


# ---------------------------------------------------------------------------
# winding number (numerical degree proxy)


def winding_number(p, k, curve, sc=None, tol=1e-9, max_points=4096):
    """Signed rotation number of the displacement map around a closed
    polyline of initial states.

    The polyline is refined (midpoint insertion in state space) until all
    successive displacement-angle increments are below pi/2.
    """
    sc = sc or SearchConfig()
    pts = [np.asarray(q, dtype=float) for q in curve]
    if len(pts) < 3:
        raise DomainError("curve needs at least 3 vertices")
    if np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]

    cache = {}

    def disp(q):
        key = (float(q[0]), float(q[1]))
        if key not in cache:
            try:
                d = _displacement(p, q, k, sc)
            except DivergenceError:
                raise DegreeUndefinedError(
                    "trajectory from a curve point diverged")
            if np.hypot(*d) < tol:
                raise DegreeUndefinedError(
                    "displacement vanishes on the curve")
            cache[key] = math.atan2(d[1], d[0])
        return cache[key]

    def delta(a, b):
        return (disp(b) - disp(a) + math.pi) % (2 * math.pi) - math.pi

    changed = True
    while changed:
        if len(pts) > max_points:
            raise DegreeUndefinedError("curve refinement did not converge")
        changed = False
        refined = []
        for i, q in enumerate(pts):
            nxt = pts[(i + 1) % len(pts)]
            refined.append(q)
            if abs(delta(q, nxt)) >= math.pi / 2:
                refined.append(0.5 * (q + nxt))
                changed = True
        pts = refined
    total = sum(delta(pts[i], pts[(i + 1) % len(pts)])
                for i in range(len(pts)))
    return int(round(total / (2 * math.pi)))


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())


def verify_solution(rec, p, r_star=None, sc=None):
    """Independent checks on an accepted solution record.

    Asserts the boundary residual, strict positivity, the monotone slope
    of e^{ct} u' on positivity/negativity intervals, the endpoint-maximum
    property on negativity intervals, stability of the sup-norm under
    re-integration at tightened tolerance, and (when given) the a priori
    bound R*.
    """
    sc = sc or SearchConfig()
    rep = VerificationReport()
    traj = rec.trajectory
    t0, t1 = traj.span
    n = max(2048, 512 * rec.k)
    ts, us, ys = traj.sample(n)
    sup = float(np.max(np.abs(us)))

    # residual
    if rec.boundary == "periodic" and rec.node_states is not None:
        nodes = rec.nodes if rec.nodes is not None \
            else _segment_nodes(p, rec.k)
        z = rec.node_states
        fz = _batch_flow(p, z, np.asarray(nodes[:-1]), np.diff(nodes), sc)
        res = float(np.max(np.linalg.norm(
            fz - np.roll(z, -1, axis=0), axis=1)))
    elif rec.boundary == "periodic":
        end = traj.eval(t1)
        res = math.hypot(end[0] - rec.initial.u, end[1] - rec.initial.y)
    else:
        res = abs(float(traj.eval(t0)[1])) + abs(float(traj.eval(t1)[1]))
    rep.checks["residual"] = res < 10 * sc.residual_tol
    rep.details["residual"] = res

    # positivity
    min_u = float(np.min(us))
    rep.checks["positive"] = min_u > 0.0
    rep.details["min_u"] = min_u

    # monotone slope of e^{ct} u' and endpoint maximum on I-
    pat = _humps_for(p, rec.k)
    slope = np.exp(p.c * ts) * ys
    # the check is qualitative; the slack must sit above dense-output
    # interpolation noise, which grows with the stiffness of the flow
    slack = 1e-6 * (1.0 + float(np.max(np.abs(slope))))
    mono_ok = True
    for (lo, hi), sign in (
            [(iv, -1) for iv in pat.pos_intervals()] +
            [(iv, +1) for iv in pat.neg_intervals()]):
        mask = (ts >= lo) & (ts <= hi)
        if mask.sum() < 2:
            continue
        seg = slope[mask]
        d = np.diff(seg) * sign
        if np.any(d < -slack):
            mono_ok = False
    rep.checks["monotone_slope"] = mono_ok

    endpoint_ok = True
    for (lo, hi) in pat.neg_intervals():
        if hi <= lo:
            continue
        _, umax = max_on_interval(traj, lo, hi)
        edge = max(float(traj.eval(lo)[0]), float(traj.eval(hi)[0]))
        if umax > edge + 1e-7 * (1.0 + sup):
            endpoint_ok = False
    rep.checks["neg_endpoint_max"] = endpoint_ok

    # re-integration at tightened tolerance
    tight_sc = replace(sc, rtol=max(sc.rtol / 100, 1e-13),
                       atol=max(sc.atol / 100, 1e-15))
    try:
        if rec.node_states is not None:
            nodes = rec.nodes if rec.nodes is not None \
                else _segment_nodes(p, rec.k)
            tight = _stitched_trajectory(p, rec.node_states, nodes, tight_sc)
        else:
            tight = integrate(p, rec.initial, t0, t1,
                              rtol=tight_sc.rtol, atol=tight_sc.atol)
        du = tight.eval(ts)[:, 0] - us
        drift = float(np.max(np.abs(du)))
        rep.checks["reintegration"] = drift < 1e-6
        rep.details["reintegration_drift"] = drift
    except DivergenceError:
        rep.checks["reintegration"] = False

    if r_star is not None:
        rep.checks["below_R_star"] = sup < r_star
        rep.details["sup_norm"] = sup
    return rep
