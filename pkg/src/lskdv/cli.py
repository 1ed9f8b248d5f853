"""Command-line front end.

Every command prints one JSON record per check followed by a summary record
(to stdout or ``--out``). Exit codes: 0 all checks passed, 2 a verification
failed, 3 singular or degenerate input, 4 configuration error.

Configuration is layered: built-in defaults, then a JSON file given with
``--config``, then explicit flags. Defaults are alpha1=4, alpha2=1, alpha0=1,
sign=+1 (so beta0=1/2), seed=0 and kind=rational. ``flow`` defaults to
sign=-1 because random boundary data are damped rather than amplified for
that choice.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import battery
from .consistency import CubeData, cac_check
from .errors import (
    ConstraintViolated,
    DegenerateParameters,
    MixedKindError,
    PoleError,
    SingularCorner,
    UnknownName,
    ZeroDenominator,
)
from .flows import flow_run, limit_order, require_distinct
from .hierarchy import POINT, catalog_get, master_bracket_constant, onshell_samples
from .lattice import CORNERS, U, X, QuadParams, eval_quad, gauge_from_u, plaquette_residuals
from .lattice import solve_corner
from .numerics import FLOAT, RATIONAL, parse_scalar
from .report import Check, Report
from .sampling import generator, random_onshell_window, random_rational
from .symmetry import on_shell_residual, point_symmetry_basis, structure_constants

EXIT_OK, EXIT_FAIL, EXIT_SINGULAR, EXIT_CONFIG = 0, 2, 3, 4

DEFAULTS = {
    "alpha1": "4",
    "alpha2": "1",
    "alpha0": "1",
    "sign": None,
    "seed": 0,
    "trials": None,
    "kind": RATIONAL,
    "tol": None,
    "out": None,
}

# commutator targets: [a, b] is fitted against this catalog entry
BRACKET_TARGETS = {
    ("M1n", "S1n"): "S2n",
    ("M1m", "S1m"): "S2m",
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    alpha1: object
    alpha2: object
    alpha0: object
    sign: int
    seed: int
    trials: int | None
    kind: str
    tol: float | None
    out: str | None
    extra: dict = field(default_factory=dict)
    argv: list = field(default_factory=list)

    def scalar(self, text):
        return parse_scalar(text, self.kind)

    def params(self, gauge=True):
        a1, a2, a0 = (self.scalar(v) for v in (self.alpha1, self.alpha2, self.alpha0))
        if a1 == 0 or a2 == 0:
            raise ConfigError("alpha1 and alpha2 must be nonzero")
        if not gauge:
            return QuadParams(a1, a2)
        return QuadParams.from_alphas(a1, a2, a0, self.sign, self.kind)

    def zero(self, v):
        if self.kind == RATIONAL:
            return v == 0
        return abs(float(v)) <= (self.tol if self.tol is not None else 1e-9)


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha1")
    common.add_argument("--alpha2")
    common.add_argument("--alpha0")
    common.add_argument("--sign", type=int, choices=(1, -1))
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--kind", choices=(RATIONAL, FLOAT))
    common.add_argument("--tol", type=float, help="float tolerance override")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--config", help="JSON file with any of the option names as keys")

    p = argparse.ArgumentParser(prog="lskdv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve-corner", parents=[common], help="solve one plaquette corner")
    for c in ("x00", "x10", "x01", "x11"):
        s.add_argument(f"--{c}")
    s.add_argument("--free", default="1,1", help="free corner as i,j")

    s = sub.add_parser("evolve", parents=[common], help="grow a window from random boundary data")
    s.add_argument("--size", type=int, default=6)
    s.add_argument("--picture", choices=(X, U), default=X)
    s.add_argument("--show", action="store_true", help="include the window in the report")

    sub.add_parser("cac", parents=[common], help="consistency around random cubes")
    sub.add_parser("lax-check", parents=[common], help="Lax pair compatibility")

    s = sub.add_parser("point-syms", parents=[common], help="classify polynomial point symmetries")
    s.add_argument("--gamma-max", type=int, default=2)

    s = sub.add_parser("sym-check", parents=[common], help="on-shell residual of a catalog entry")
    s.add_argument("name")

    s = sub.add_parser("commutator", parents=[common], help="bracket of two catalog entries")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--target", help="entry to fit the bracket against")

    sub.add_parser("miura-check", parents=[common], help="Miura map against the Volterra flow")

    s = sub.add_parser("flow", parents=[common], help="integrate a flow and measure drift")
    s.add_argument("name")
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--h", type=float, default=1e-3)
    s.add_argument("--size", type=int, default=8)

    s = sub.add_parser("limit-check", parents=[common], help="continuous limit order")
    s.add_argument("--q", type=float, default=1.0)
    s.add_argument("--deltas", default="0.1,0.05,0.025")
    s.add_argument("--seeds", default="linear,sine,tanh")

    sub.add_parser("suite", parents=[common], help="run the full acceptance battery")
    return p


_COMMON = tuple(DEFAULTS)


def _subparser(parser, command):
    action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return action.choices[command]


def parse_args(argv=None):
    """Parse flags; values from ``--config`` become defaults that flags override."""
    parser = _parser()
    ns = parser.parse_args(argv)
    if ns.config:
        try:
            with open(ns.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        data = {k.replace("-", "_"): v for k, v in data.items()}
        unknown = set(data) - (set(vars(ns)) - {"command", "config"})
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        _subparser(parser, ns.command).set_defaults(**data)
        ns = parser.parse_args(argv)
    return ns


def build_config(ns, argv=()):
    """RunConfig from parsed arguments, with built-in defaults for unset options."""
    merged = {k: (DEFAULTS[k] if getattr(ns, k) is None else getattr(ns, k)) for k in _COMMON}
    extra = {k: v for k, v in vars(ns).items() if k not in _COMMON and k not in
             ("command", "config")}
    if merged["sign"] is None:
        merged["sign"] = -1 if ns.command == "flow" else 1
    if merged["kind"] not in (RATIONAL, FLOAT):
        raise ConfigError(f"kind must be {RATIONAL} or {FLOAT}")
    if merged["sign"] not in (1, -1):
        raise ConfigError("sign must be +1 or -1")
    for k in ("alpha1", "alpha2", "alpha0"):
        merged[k] = str(merged[k])
    return RunConfig(ns.command, *(merged[k] for k in _COMMON), extra=extra, argv=list(argv))


# -- commands ---------------------------------------------------------------


def _require_rational(cfg):
    if cfg.kind != RATIONAL:
        raise ConfigError(f"{cfg.command} runs on exact rationals only")


def cmd_solve_corner(cfg, rep):
    params = cfg.params(gauge=False)
    try:
        free = tuple(int(t) for t in cfg.extra["free"].split(","))
    except ValueError:
        raise ConfigError("--free must look like i,j") from None
    if free not in CORNERS:
        raise ConfigError(f"--free must be one of {CORNERS}")
    defaults = {"x00": "0", "x10": "1", "x01": "3", "x11": "0"}
    vals = {c: cfg.scalar(cfg.extra.get(c) or defaults[c]) for c in defaults}
    key = "x" + "".join(map(str, free))
    vals[key] = None
    sol = solve_corner(params, vals["x00"], vals["x10"], vals["x01"], vals["x11"], free)
    vals[key] = sol
    q = eval_quad(params, vals["x00"], vals["x10"], vals["x01"], vals["x11"])
    rep.add(Check("solved corner puts the plaquette on-shell", "quad equation Q = 0", cfg.kind,
                  cfg.zero(q), q, 0, {"free": key, "solution": sol}))


def cmd_evolve(cfg, rep):
    size = cfg.extra["size"]
    if size < 2:
        raise ConfigError("--size must be at least 2")
    picture = cfg.extra["picture"]
    exact = RunConfig(**{**vars(cfg), "kind": RATIONAL}).params(gauge=picture == U)
    w = random_onshell_window(exact, generator(cfg.seed), (0, size), (0, size), picture)
    if w is None:
        raise SingularCorner("corner coefficient", cell="every boundary draw")
    params = exact
    if cfg.kind == FLOAT:
        params, w = exact.to_float(), w.to_float()
    worst = max((abs(v) for v in plaquette_residuals(params, w).flat), default=0)
    detail = {"size": size, "picture": picture, "params": params.to_record()}
    if cfg.extra["show"]:
        detail["window"] = w.to_record()
    rep.add(Check("evolved window is on-shell", "quad equation on every plaquette", cfg.kind,
                  cfg.zero(worst), worst, 0, detail))


def cmd_cac(cfg, rep):
    rng = generator(cfg.seed)
    trials = cfg.trials or 100
    agree, singular = 0, 0
    sample = None
    for _ in range(trials):
        while True:
            alphas = tuple(random_rational(rng, 20, nonzero=True) for _ in range(3))
            xs = [random_rational(rng) for _ in range(4)]
            if cfg.kind == FLOAT:
                alphas, xs = tuple(map(float, alphas)), [float(v) for v in xs]
            try:
                r = cac_check(CubeData(*xs, alphas), rtol=cfg.tol or 1e-12)
                break
            except SingularCorner:
                singular += 1
        agree += r.agree
        sample = sample or r
    rep.add(Check("consistency around the cube", "three-way agreement of x123", cfg.kind,
                  agree == trials, agree, trials,
                  {"resampled_singular": singular, "first_cube": sample}))


def cmd_lax_check(cfg, rep):
    _require_rational(cfg)
    rep.extend(battery.lax_pair(cfg.seed, plaquettes=cfg.trials or 100))


def cmd_point_syms(cfg, rep):
    _require_rational(cfg)
    params = cfg.params(gauge=False)
    if params.degenerate:
        raise DegenerateParameters(
            f"alpha1 == alpha2 == {params.alpha1}: the quad equation factorizes and the "
            "point algebra is infinite dimensional"
        )
    gmax = cfg.extra["gamma_max"]
    if gmax < 0:
        raise ConfigError("--gamma-max must be non-negative")
    basis = point_symmetry_basis(params, gmax, seed=cfg.seed)
    want = min(gmax + 1, 3)
    unit = [tuple(Fraction(int(i == k)) for i in range(gmax + 1)) for k in range(want)]
    rep.add(Check("point symmetry dimension", "determining equations of the quad equation",
                  "exact", basis.dimension == want and basis.site_independent, basis.dimension,
                  want, {"site_independent": basis.site_independent,
                         "polynomials": basis.polynomials, "samples": basis.samples}))
    if basis.site_independent and basis.polynomials == unit and want == 3:
        table = structure_constants(basis.characteristics(params), seed=cfg.seed)
        for (i, j), coeffs in battery.SL2_TABLE.items():
            rep.add(Check(f"[X{i}, X{j}]", "sl(2) commutation relations", "exact",
                          table[i, j] == coeffs, table[i, j], coeffs))


def _entry_window(entry, params, w):
    return gauge_from_u(params, w) if entry.kind == POINT else w


def cmd_sym_check(cfg, rep):
    name = cfg.extra["name"]
    params = RunConfig(**{**vars(cfg), "kind": RATIONAL}).params()
    entry = catalog_get(name, params)
    char, eval_params = entry.characteristic, params
    if cfg.kind == FLOAT:
        eval_params = params.to_float()
        char = catalog_get(name, eval_params).characteristic
    rng = generator(cfg.seed)
    trials = cfg.trials or 100
    zeros, sample, poles = 0, None, 0
    done = 0
    while done < trials:
        w, n, m = next(onshell_samples(params, rng, entry.characteristic, 1))
        w = _entry_window(entry, params, w)
        if cfg.kind == FLOAT:
            w = w.to_float()
        try:
            r = on_shell_residual(char, eval_params, w, n, m)
        except (PoleError, SingularCorner):
            poles += 1
            if poles > 10 * trials:
                raise
            continue
        done += 1
        zeros += cfg.zero(r)
        if sample is None and not cfg.zero(r):
            sample = {"residual": r, "root": [n, m]}
    rep.add(Check(f"{name} is a symmetry", f"on-shell prolongation of {name}", cfg.kind,
                  zeros == trials, zeros, trials,
                  {"zero_residuals": zeros, "resampled_poles": poles,
                   "first_nonzero": sample, "params": params.to_record()}))


def cmd_commutator(cfg, rep):
    _require_rational(cfg)
    a, b = cfg.extra["a"], cfg.extra["b"]
    params = cfg.params()
    ea, eb = catalog_get(a, params), catalog_get(b, params)
    if (ea.kind == POINT) != (eb.kind == POINT):
        raise ConfigError("cannot bracket a point characteristic with a lattice one")
    if ea.kind == POINT:
        basis = [catalog_get(f"X{k}", params).characteristic for k in range(3)]
        i, j = int(a[1]), int(b[1])
        table = structure_constants(basis, seed=cfg.seed)
        want = [0, 0, 0] if i == j else (
            battery.SL2_TABLE[i, j] if (i, j) in battery.SL2_TABLE
            else [-c for c in battery.SL2_TABLE[j, i]])
        rep.add(Check(f"[{a}, {b}]", "sl(2) commutation relations", "exact",
                      table[i, j] == want, table[i, j], want))
        return
    target = cfg.extra.get("target") or BRACKET_TARGETS.get((a, b), b)
    et = catalog_get(target, params)
    fit = master_bracket_constant(ea, eb, et, cfg.trials or 50, seed=cfg.seed)
    rep.add(Check(f"[{a}, {b}] = c {target}", f"bracket of {a} with {b}", "exact", True,
                  fit.constant, None, fit.to_record()))


def cmd_miura(cfg, rep):
    _require_rational(cfg)
    rep.extend(battery.miura_link(cfg.seed, trials=cfg.trials or 100))


def cmd_flow(cfg, rep):
    name = cfg.extra["name"]
    params = cfg.params()
    if cfg.kind != RATIONAL:
        raise ConfigError("flow starts from an exact on-shell window; omit --kind")
    entry = catalog_get(name, params)
    size = cfg.extra["size"]
    rng = generator(cfg.seed)
    w = random_onshell_window(params, rng, (0, size), (0, size), U, magnitude=Fraction(1, 5))
    w = _entry_window(entry, params, w)
    run = flow_run(entry.characteristic, w, cfg.extra["eps"], cfg.extra["h"], params,
                   measure=True)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    rep.add(Check(f"{name} flow keeps solutions", f"flow of {name}", "float",
                  run.drift <= tol, run.drift, tol, run.to_record()))


def cmd_limit(cfg, rep):
    try:
        deltas = [float(d) for d in cfg.extra["deltas"].split(",")]
    except ValueError:
        raise ConfigError("--deltas must be comma separated numbers") from None
    q = cfg.extra["q"]
    if any(d == 0 for d in deltas):
        require_distinct(q, q)
    seeds = [s for s in cfg.extra["seeds"].split(",") if s]
    for s in seeds:
        if s not in ("linear", "sine", "tanh"):
            raise ConfigError(f"unknown seed profile {s!r}")
        r = limit_order(q, deltas, s)
        rep.add(Check(f"continuous limit order ({s} seed)",
                      "differential-difference limit of the quad equation", "float",
                      r.min_order >= 1, r.min_order, 1, r.to_record()))


def cmd_suite(cfg, rep):
    _require_rational(cfg)
    for k, title, checks in battery.run_all(cfg.seed):
        for c in checks:
            c.detail = dict(c.detail, criterion=k, family=title)
            rep.add(c)


COMMANDS = {
    "solve-corner": cmd_solve_corner,
    "evolve": cmd_evolve,
    "cac": cmd_cac,
    "lax-check": cmd_lax_check,
    "point-syms": cmd_point_syms,
    "sym-check": cmd_sym_check,
    "commutator": cmd_commutator,
    "miura-check": cmd_miura,
    "flow": cmd_flow,
    "limit-check": cmd_limit,
    "suite": cmd_suite,
}

SINGULAR = (DegenerateParameters, SingularCorner, PoleError, ZeroDenominator)
CONFIG = (ConfigError, ConstraintViolated, UnknownName, MixedKindError, ValueError)


def run(cfg):
    """Execute one configured command; returns ``(exit_code, report)``."""
    rep = Report(cfg.argv or [cfg.command])
    try:
        COMMANDS[cfg.command](cfg, rep)
    except SINGULAR as exc:
        rep.status, rep.error = "SINGULAR", f"{type(exc).__name__}: {exc}"
        return EXIT_SINGULAR, rep
    except CONFIG as exc:
        rep.status, rep.error = "CONFIG_ERROR", f"{type(exc).__name__}: {exc}"
        return EXIT_CONFIG, rep
    return (EXIT_OK if rep.verdict == "PASS" else EXIT_FAIL), rep


def main(argv=None):
    try:
        ns = parse_args(argv)
        cfg = build_config(ns, argv if argv is not None else sys.argv[1:])
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    except ConfigError as exc:
        rep = Report(list(argv if argv is not None else sys.argv[1:])[:1], status="CONFIG_ERROR", error=str(exc))
        rep.write(sys.stdout)
        return EXIT_CONFIG
    code, rep = run(cfg)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            rep.write(fh)
    else:
        rep.write(sys.stdout)
    return code


__all__ = ["RunConfig", "build_config", "run", "main", "COMMANDS"]
