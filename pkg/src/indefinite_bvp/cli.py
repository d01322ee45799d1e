"""Command line interface: config parsing, subcommand dispatch, reports.

Configs are INI files with [problem], [search], [annulus] and [output]
sections.  Weights and nonlinearities are given either as shorthand
constructors (sin_pm(freq,nu,mu), sine(freq), power(p),
arctan_scaled(nu), clamp0(expr)) or as arithmetic expressions in t
(weights) / s (nonlinearities).

Exit codes: 0 success, 2 configuration error, 3 hypothesis failure,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import math
import re
import sys
from importlib import metadata

from .bounds import compute_mu_star
from .eigen import first_eigenvalue, EigenProblem, ginf_threshold
from .errors import (BracketingError, ConfigurationError, DegreeUndefinedError,
                     DivergenceError, DomainError, HypothesisError,
                     PatternError, SolverError, UnclassifiableError)
from .expressions import parse_expression
from .integrator import ProblemSpec
from .lyndon import lyndon_words, witt_count
from .nonlinearity import NonlinearitySpec
from .presets import get_preset, list_presets
from .radial import (AnnulusProblem, check_q_integral, find_radial_solutions,
                     solution_to_radial)
from .shooting import (SearchConfig, adaptive_levels, classify_code,
                       find_neumann_solutions, find_periodic_solutions,
                       verify_solution)
from .subharmonic import (CodeTarget, enumerate_class_representatives,
                          find_coded_solution, minimal_period_multiple)
from .weight import WeightSpec

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_HYPOTHESIS = 3
EXIT_NUMERICAL = 4

_CALL_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*\((.*)\)\s*$")


def _version():
    try:
        return metadata.version("indefinite-bvp")
    except metadata.PackageNotFoundError:
        return "unknown"


def _split_args(src):
    """Top-level comma split of a constructor argument list."""
    parts, depth, cur = [], 0, []
    for ch in src:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur or parts:
        parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_weight(src, period=None):
    """Weight from shorthand or an expression in t."""
    m = _CALL_RE.match(src)
    if m and m.group(1) in ("sin_pm", "sine", "table"):
        name, args = m.group(1), _split_args(m.group(2))
        try:
            if name == "sine":
                return WeightSpec.sine(float(args[0]), period=period)
            if name == "sin_pm":
                freq, nu, mu = (float(a) for a in args[:3])
                return WeightSpec.sin_pm(freq, nu=nu, mu=mu, period=period)
            raise ConfigurationError("table weights need explicit "
                                     "breaks/values keys, not shorthand")
        except (ValueError, IndexError) as exc:
            raise ConfigurationError(
                "bad arguments in weight shorthand %r: %s" % (src, exc))
    if period is None:
        raise ConfigurationError("expression weights require period")
    return WeightSpec.from_expression(src, period)


def parse_nonlinearity(src):
    """Nonlinearity from shorthand or an expression in s."""
    m = _CALL_RE.match(src)
    if m and m.group(1) in ("power", "arctan_scaled", "clamp0"):
        name, inner = m.group(1), m.group(2)
        if name == "power":
            return NonlinearitySpec.power(float(inner))
        if name == "arctan_scaled":
            return NonlinearitySpec.arctan_scaled(float(inner))
        return NonlinearitySpec.from_expression(inner, clamp=True)
    return NonlinearitySpec.from_expression(src)


def _getfloat(sec, key, default=None):
    if key not in sec:
        if default is None:
            raise ConfigurationError("missing config key %r" % key)
        return default
    try:
        return float(sec[key])
    except ValueError:
        raise ConfigurationError("config key %r is not a number" % key)


def load_config(path):
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigurationError("cannot read config file %r" % path)
    return cp


def problem_from_config(cp, mu_override=None):
    """(ProblemSpec, SearchConfig, resolved dict) from a parsed config."""
    if "problem" not in cp:
        raise ConfigurationError("config needs a [problem] section")
    sec = cp["problem"]
    resolved = dict(sec)
    if "preset" in sec:
        kwargs = {}
        if mu_override is not None:
            kwargs["mu"] = mu_override
        elif "mu" in sec:
            kwargs["mu"] = _getfloat(sec, "mu")
        preset = get_preset(sec["preset"], **kwargs)
        search = _search_from_config(cp, default=preset.search)
        return preset.problem, search, resolved
    period = _getfloat(sec, "period", math.nan)
    period = None if math.isnan(period) else period
    if "weight" not in sec:
        raise ConfigurationError("[problem] needs weight or preset")
    w = parse_weight(sec["weight"], period=period)
    g = parse_nonlinearity(sec.get("g", "power(2)"))
    mu = mu_override if mu_override is not None else _getfloat(sec, "mu", 1.0)
    c = _getfloat(sec, "c", 0.0)
    boundary = sec.get("boundary", "periodic")
    p = ProblemSpec.build(w, mu, c, g, boundary=boundary)
    return p, _search_from_config(cp), resolved


def _search_from_config(cp, default=None):
    base = default or SearchConfig()
    if "search" not in cp:
        return base
    sec = cp["search"]
    fields = {}
    for f in dataclasses.fields(SearchConfig):
        if f.name in sec:
            cast = int if f.type == "int" else float
            fields[f.name] = cast(sec[f.name])
    return dataclasses.replace(base, **fields)


def annulus_from_config(cp):
    if "annulus" not in cp:
        raise ConfigurationError("config needs an [annulus] section")
    sec = cp["annulus"]
    N = int(_getfloat(sec, "n"))
    R1 = _getfloat(sec, "r1")
    R2 = _getfloat(sec, "r2")
    mu = _getfloat(sec, "mu", 1.0)
    if "q" not in sec:
        raise ConfigurationError("[annulus] needs the radial weight q")
    expr = parse_expression(sec["q"])
    g = parse_nonlinearity(sec.get("g", "power(2)"))
    return AnnulusProblem(N, R1, R2, lambda r: expr(r), g, mu)


# ---------------------------------------------------------------------------
# report helpers


def _record_dict(rec):
    return {
        "initial": {"u": rec.initial.u, "y": rec.initial.y},
        "k": rec.k,
        "residual": rec.residual,
        "positive": rec.positive,
        "sup_norm": rec.sup_norm,
        "boundary": rec.boundary,
        "code": rec.code_string,
        "min_period_multiple": rec.min_period_multiple,
        "unclassifiable": rec.unclassifiable,
    }


def _emit(report, args):
    text = json.dumps(report, indent=2, sort_keys=True, default=float)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _base_report(resolved, command):
    return {"version": _version(), "command": command, "config": resolved}


def _classified(recs, p, levels=None):
    if recs and levels is None:
        levels = adaptive_levels(recs, p)
    out = []
    for rec in recs:
        if p.pattern is not None and levels is not None:
            try:
                classify_code(rec, p, *levels)
            except UnclassifiableError:
                rec.unclassifiable = True
        if rec.boundary == "periodic":
            minimal_period_multiple(rec, p)
        out.append(rec)
    return out, levels


def _write_trajectories(recs, prefix):
    for i, rec in enumerate(recs):
        rec.trajectory.to_csv("%s_%d.csv" % (prefix, i))


# ---------------------------------------------------------------------------
# subcommands


def cmd_bounds(args):
    cp = load_config(args.config)
    p, search, resolved = problem_from_config(cp, args.mu)
    report = _base_report(resolved, "bounds")
    report["bounds"] = compute_mu_star(p, search_config=None).to_dict()
    _emit(report, args)
    return EXIT_OK


def cmd_solve(args):
    cp = load_config(args.config)
    p, sc, resolved = problem_from_config(cp, args.mu)
    recs = find_periodic_solutions(p, args.k, sc)
    recs, levels = _classified(recs, p)
    report = _base_report(resolved, "solve")
    report["k"] = args.k
    report["levels"] = {"r": levels[0], "R": levels[1]} if levels else None
    report["solutions"] = [_record_dict(r) for r in recs]
    if args.trajectories:
        _write_trajectories(recs, args.trajectories)
    _emit(report, args)
    return EXIT_OK


def cmd_neumann(args):
    cp = load_config(args.config)
    p, sc, resolved = problem_from_config(cp, args.mu)
    recs = find_neumann_solutions(p, sc)
    recs, levels = _classified(recs, p)
    report = _base_report(resolved, "neumann")
    report["levels"] = {"r": levels[0], "R": levels[1]} if levels else None
    report["solutions"] = [_record_dict(r) for r in recs]
    if args.trajectories:
        _write_trajectories(recs, args.trajectories)
    _emit(report, args)
    return EXIT_OK


def cmd_subharmonic(args):
    if args.enumerate:
        if args.m is None:
            raise ConfigurationError("--enumerate needs --m")
        targets = enumerate_class_representatives(args.m, args.k)
        report = _base_report({}, "subharmonic")
        report["k"] = args.k
        report["m"] = args.m
        report["class_count"] = int(witt_count(2 ** args.m, args.k))
        report["classes"] = [t.word_string for t in targets]
        _emit(report, args)
        return EXIT_OK
    cp = load_config(args.config)
    p, sc, resolved = problem_from_config(cp, args.mu)
    report = _base_report(resolved, "subharmonic")
    report["k"] = args.k
    if args.word:
        word = tuple(int(b) for b in args.word)
        tgt = CodeTarget(args.k, word)
        rec = find_coded_solution(p, tgt, sc)
        report["targets"] = [{
            "word": tgt.word_string,
            "found": rec is not None,
            "record": _record_dict(rec) if rec else None,
        }]
    else:
        targets = enumerate_class_representatives(p.pattern.m, args.k)
        rows = []
        for tgt in targets:
            rec = find_coded_solution(p, tgt, sc)
            if rec is not None:
                minimal_period_multiple(rec, p)
            rows.append({"word": tgt.word_string,
                         "found": rec is not None,
                         "record": _record_dict(rec) if rec else None})
        report["targets"] = rows
    _emit(report, args)
    return EXIT_OK


def cmd_lyndon(args):
    report = _base_report({}, "lyndon")
    report["n"] = args.n
    report["k"] = args.k
    report["count"] = int(witt_count(args.n, args.k))
    if args.list:
        report["words"] = ["".join(str(s) for s in w.symbols)
                           for w in lyndon_words(args.n, args.k)]
    _emit(report, args)
    return EXIT_OK


def cmd_eigen(args):
    cp = load_config(args.config)
    p, _, resolved = problem_from_config(cp, args.mu)
    report = _base_report(resolved, "eigen")
    lams = []
    for i in range(p.pattern.m):
        ep = EigenProblem.from_hump(p, i)
        lams.append(first_eigenvalue(ep))
    report["hump_eigenvalues"] = lams
    report["ginf_threshold"] = ginf_threshold(p)
    _emit(report, args)
    return EXIT_OK


def cmd_radial(args):
    cp = load_config(args.config)
    ap = annulus_from_config(cp)
    recs, rm, p = find_radial_solutions(ap)
    report = _base_report(dict(cp["annulus"]), "radial")
    report["T"] = rm.T
    report["q_integral"] = check_q_integral(ap)
    report["solutions"] = [_record_dict(r) for r in recs]
    if args.profiles:
        for i, rec in enumerate(recs):
            rs, us = solution_to_radial(rec.trajectory, rm)
            path = "%s_%d.csv" % (args.profiles, i)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("r,U\n")
                for r, u in zip(rs, us):
                    fh.write("%.17g,%.17g\n" % (r, u))
    _emit(report, args)
    return EXIT_OK


def cmd_report(args):
    preset = get_preset(args.preset)
    p, sc = preset.problem, preset.search
    report = _base_report({"preset": preset.name}, "report")
    report["notes"] = preset.notes
    if p.boundary == "neumann":
        recs = find_neumann_solutions(p, sc)
    else:
        recs = find_periodic_solutions(p, preset.k, sc)
    recs, levels = _classified(recs, p)
    for rec in recs:
        rep = verify_solution(rec, p, sc=sc)
        rec._verified = rep.passed
    report["levels"] = {"r": levels[0], "R": levels[1]} if levels else None
    report["solutions"] = [dict(_record_dict(r), verified=r._verified)
                           for r in recs]
    _emit(report, args)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="indefinite-bvp",
        description="Positive periodic, subharmonic and Neumann/radial "
                    "solutions of superlinear indefinite problems")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp, config=True):
        if config:
            sp.add_argument("--config", required=True,
                            help="INI config file")
            sp.add_argument("--mu", type=float, default=None,
                            help="override the weight scaling mu")
        sp.add_argument("--out", help="write the JSON report here")

    sp = sub.add_parser("bounds", help="explicit constants and mu*")
    add_common(sp)
    sp.set_defaults(fn=cmd_bounds)

    sp = sub.add_parser("solve", help="periodic solutions")
    add_common(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--trajectories", help="CSV path prefix")
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("neumann", help="Neumann solutions")
    add_common(sp)
    sp.add_argument("--trajectories", help="CSV path prefix")
    sp.set_defaults(fn=cmd_neumann)

    sp = sub.add_parser("subharmonic", help="coded kT-periodic solutions")
    sp.add_argument("--config", help="INI config file")
    sp.add_argument("--mu", type=float, default=None)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--word", help="target bit string of length m*k")
    sp.add_argument("--enumerate", action="store_true",
                    help="list class representatives only")
    sp.add_argument("--m", type=int, help="humps per period (enumeration)")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_subharmonic)

    sp = sub.add_parser("lyndon", help="Lyndon word counts")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_lyndon)

    sp = sub.add_parser("eigen", help="hump eigenvalues and threshold")
    add_common(sp)
    sp.set_defaults(fn=cmd_eigen)

    sp = sub.add_parser("radial", help="radial Neumann profiles")
    sp.add_argument("--config", required=True)
    sp.add_argument("--profiles", help="CSV path prefix for (r, U)")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_radial)

    sp = sub.add_parser("report", help="run a named preset end to end")
    sp.add_argument("--preset", required=True, choices=list_presets())
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_report)

    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.fn(args)
    except (ConfigurationError, PatternError) as exc:
        _error(exc, EXIT_CONFIG)
        return EXIT_CONFIG
    except HypothesisError as exc:
        _error(exc, EXIT_HYPOTHESIS)
        return EXIT_HYPOTHESIS
    except (BracketingError, DivergenceError, DegreeUndefinedError,
            UnclassifiableError, DomainError, SolverError) as exc:
        _error(exc, EXIT_NUMERICAL)
        return EXIT_NUMERICAL


def _error(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc),
               "exit_code": code}
    print(json.dumps(payload, indent=2), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
