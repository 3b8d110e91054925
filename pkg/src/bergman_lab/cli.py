"""Batch command-line front end.

Every command writes one JSON report (stdout or ``--out``) and, where a
profile or table exists, a CSV (``--csv``). Failures print a JSON error
object to stderr and exit with the status of the error class:

==========  ======  ====================================================
code        status  meaning
==========  ======  ====================================================
USAGE       2       unknown command or bad option
INPUT       3       unreadable or malformed input file
DOMAIN      4       point or map outside the disk
REGIME      5       exponents do not fit the requested statistic
CONTRACT    6       invalid parameter combination
CONFIG      7       resource cap exceeded or seed missing
RESOLUTION  8       lattice or quadrature budget exceeded
SCOPE       9       parameters outside the supported range
==========  ======  ====================================================
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .carleson import (R_CUT_PAIR, STABILITY_TOL, DiscreteMeasure, carleson_integral_statistic,
                       carleson_statistic, sobolev_rigidity_check)
from .errors import ConfigurationError, ContractError, InputError, LabError, RegimeError
from .geometry import build_lattice
from .io import (coefficients_csv, dumps_report, lattice_csv, read_function, read_measure_csv,
                 read_operator, read_problem, table_csv, write_text)
from .kernels import (combination_sweep, kernel_norm_sweep, leibniz_table,
                      ratio_windows)
from .norms import ap_norm, bloch_norm, littlewood_paley_norm, lp_integral
from .ode import coefficient_agreement, neumann_solve, taylor_ode_oracle
from .operators import (CompositionSumSpec, VolterraSpec, apply_comp_sum, apply_volterra,
                        composition_sum_rigidity, empirical_operator_norm, hilbert_schmidt_check,
                        single_symbol_criterion, volterra_bloch_criterion,
                        volterra_integral_criterion)
from .profiles import ProfileThresholds
from .quadrature import (DEFAULT_R_CUT, build_disk_rule, build_graded_rule, default_rule,
                         with_boundary_tail)

USAGE_STATUS = 2

ACTIONS = {
    "norm": None,
    "lattice": None,
    "carleson": ("statistic", "geometric", "integral", "sobolev"),
    "volterra": ("apply", "criteria", "empirical"),
    "compsum": ("apply", "rigidity", "hs"),
    "ode": ("solve", "oracle"),
    "kernelcheck": ("window", "combination", "bj"),
}

# commands whose result depends on a random family
RANDOMIZED = {("carleson", "sobolev"), ("volterra", "empirical"), ("compsum", "rigidity"),
              ("compsum", "hs"), ("kernelcheck", "combination")}


@dataclass
class RunConfig:
    """Everything a command needs; echoed into its report.

    Attributes
    ----------
    command, action : str
    inputs : dict
        Input file paths by role (``fn``, ``op``, ``measure``, ``u``, ...).
    p, q : float, optional
    n, k : int, optional
    radial_n, angular_n : int, optional
        When both are given, integrals use a tensor rule with these sizes on
        ``|z| <= r_cut`` plus the boundary tail instead of the default
        graded rule.
    r_cut : float, optional
    r, r_max : float
        Lattice radius and certified region.
    seed : int, optional
        Required by randomized commands.
    out, csv : str, optional
        Report and table destinations.
    options : dict
        Command-specific settings.
    thresholds : ProfileThresholds
    stability_tol : float
    """

    command: str
    action: str | None = None
    inputs: dict = field(default_factory=dict)
    p: float | None = None
    q: float | None = None
    n: int | None = None
    k: int | None = None
    radial_n: int | None = None
    angular_n: int | None = None
    r_cut: float | None = None
    r: float = 1.0
    r_max: float = 0.999
    seed: int | None = None
    out: str | None = None
    csv: str | None = None
    options: dict = field(default_factory=dict)
    thresholds: ProfileThresholds = field(default_factory=ProfileThresholds)
    stability_tol: float = STABILITY_TOL

    def validate(self) -> None:
        if self.command not in ACTIONS:
            raise ContractError(f"unknown command {self.command!r}")
        allowed = ACTIONS[self.command]
        if allowed is not None and self.action not in allowed:
            raise ContractError(f"{self.command} needs one of {', '.join(allowed)}")
        if (self.command, self.action) in RANDOMIZED and self.seed is None:
            raise ConfigurationError(f"{self.command} {self.action} draws a random family: "
                                     "pass --seed")
        for name in ("p", "q"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ContractError(f"{name} must be positive")
        if (self.radial_n is None) != (self.angular_n is None):
            raise ContractError("give both --radial-n and --angular-n or neither")
        if self.r_cut is not None and not 0 < self.r_cut < 1:
            raise ContractError("r_cut must lie in (0, 1)")

    @property
    def regime(self) -> str | None:
        if self.p is None or self.q is None:
            return None
        return "p<=q" if self.p <= self.q else "q<p"

    def rule(self):
        """Integration rule for norms, or None for the module defaults."""
        if self.radial_n is not None:
            return with_boundary_tail(build_disk_rule(self.radial_n, self.angular_n,
                                                      self.r_cut or DEFAULT_R_CUT))
        if self.r_cut is not None:
            return with_boundary_tail(build_graded_rule(self.r_cut))
        return None

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["thresholds"] = self.thresholds.to_dict()
        for key in ("out", "csv"):
            out.pop(key)
        return out


def _need(value, name: str):
    if value is None:
        raise ContractError(f"--{name.replace('_', '-')} is required")
    return value


def _input(config: RunConfig, role: str):
    path = config.inputs.get(role)
    if not path:
        raise ContractError(f"--{role} is required")
    return path


def _radii(w_max: float) -> list[float]:
    base = [0.0, 0.5, 0.75, 0.9, 0.95, 0.99, 0.995, 0.999]
    return sorted({w for w in base if w <= w_max} | {w_max})


# ---------------------------------------------------------------------------
# commands; each returns (result dict, csv text or None)


def _run_norm(c: RunConfig):
    f = read_function(_input(c, "fn"))
    kind = c.options.get("kind", "ap")
    if kind == "bloch":
        rep = bloch_norm(f, c.options.get("m", 1), c.options.get("alpha", 1.0),
                         thresholds=c.thresholds)
        table = table_csv({"ring_gap": rep.ring_gaps, "max": rep.profile})
        return rep.to_dict(), table
    p = _need(c.p, "p")
    rule = c.rule()
    if kind == "lp":
        n = _need(c.n, "n")
        return {"kind": kind, "p": p, "n": n,
                "norm": littlewood_paley_norm(f, p, n, rule)}, None
    rule = rule or default_rule()
    return {"kind": "ap", "p": p, "norm": ap_norm(f, p, rule), "rule": rule.describe()}, None


def _run_lattice(c: RunConfig):
    lat = build_lattice(c.r, c.r_max)
    return {"r": lat.r, "r_max": lat.r_max, "points": len(lat),
            "multiplicity_bound": lat.multiplicity_bound,
            "certificate": lat.certificate}, lattice_csv(lat)


def _measure(c: RunConfig) -> DiscreteMeasure:
    t = c.options.get("weighted_area")
    if t is not None:
        if c.inputs.get("measure"):
            raise ContractError("give --measure or --weighted-area, not both")
        return DiscreteMeasure.weighted_area(t)
    return read_measure_csv(_input(c, "measure"))


def _run_carleson(c: RunConfig):
    p, q = _need(c.p, "p"), _need(c.q, "q")
    mu = _measure(c)
    if c.action == "sobolev":
        paths = c.inputs.get("u") or []
        if not paths:
            raise ContractError("--u is required")
        u = [read_function(path) for path in paths]
        lat = build_lattice(c.r, c.r_max)
        rep = sobolev_rigidity_check(mu, u, p, q, lat, c.options.get("family_size", 8),
                                     c.seed, thresholds=c.thresholds,
                                     stability_tol=c.stability_tol)
        return rep, None
    k = c.k if c.k is not None else 0
    action = c.action
    if action == "statistic":
        action = "geometric" if p <= q else "integral"
    if action == "geometric":
        if p > q:
            raise RegimeError(f"geometric statistic needs p <= q, got p={p}, q={q}")
        lat = build_lattice(c.r, c.r_max)
        rep = carleson_statistic(mu, k, p, q, lat, c.thresholds)
        table = table_csv({"ring_gap": rep.ring_gaps, "max": rep.profile})
    else:
        if q >= p:
            raise RegimeError(f"integral statistic needs q < p, got p={p}, q={q}")
        rep = carleson_integral_statistic(mu, k, p, q, c.r, R_CUT_PAIR, c.stability_tol)
        table = table_csv({"r_cut": list(R_CUT_PAIR), "value": rep.profile})
    return {"statistic": action, **rep.to_dict()}, table


def _operator(c: RunConfig, kind):
    op = read_operator(_input(c, "op"))
    if not isinstance(op, kind):
        raise InputError(f"operator file does not describe a {kind.__name__}")
    return op


def _run_volterra(c: RunConfig):
    op = _operator(c, VolterraSpec)
    if c.action == "apply":
        f = read_function(_input(c, "fn"))
        image = apply_volterra(op, f, c.options.get("degree", 256))
        return {"n": op.n, "image": image, "degree": image.degree}, coefficients_csv(image)
    p, q = _need(c.p, "p"), _need(c.q, "q")
    if c.action == "criteria":
        if p <= q:
            out = {"criterion": volterra_bloch_criterion(op, p, q, c.thresholds)}
            if op.single_symbol is not None:
                out["single_symbol"] = single_symbol_criterion(op.single_symbol[0], p, q,
                                                               c.thresholds)
        else:
            out = {"criterion": volterra_integral_criterion(op, p, q,
                                                            stability_tol=c.stability_tol)}
        return {"regime": c.regime, **out}, None
    rep = empirical_operator_norm(op, p, q, levels=c.options.get("levels", 7), seed=c.seed,
                                  thresholds=c.thresholds)
    table = table_csv({"witness_radius": rep["witness_radii"], "ratio": rep["profile"]})
    return rep, table


def _run_compsum(c: RunConfig):
    op = _operator(c, CompositionSumSpec)
    if c.action == "apply":
        f = read_function(_input(c, "fn"))
        points = np.array([complex(*xy) for xy in c.options.get("at", [(0.0, 0.0)])])
        q = c.q if c.q is not None else 2.0
        rule = c.rule() or default_rule()
        norm = lp_integral(apply_comp_sum(op, f, rule.nodes), q, rule) ** (1.0 / q)
        values = apply_comp_sum(op, f, points)
        return {"q": q, "image_norm": norm, "points": points.tolist(),
                "values": values.tolist()}, None
    if c.action == "hs":
        rep = hilbert_schmidt_check(op, c.options.get("basis_size", 200),
                                    stability_tol=c.stability_tol,
                                    adjoint_samples=c.options.get("samples", 50), seed=c.seed)
        table = table_csv({"k": list(range(rep["basis_size"])),
                           "term": rep["terms"]})
        return rep, table
    p, q = _need(c.p, "p"), _need(c.q, "q")
    lat = build_lattice(c.r, c.r_max)
    rep = composition_sum_rigidity(op, p, q, lat, c.options.get("resolution", 1),
                                   c.options.get("levels", 7), c.seed, c.thresholds)
    return rep, None


def _run_ode(c: RunConfig):
    problem = read_problem(_input(c, "problem"))
    degree = c.options.get("degree")
    if c.action == "oracle":
        f = taylor_ode_oracle(problem, degree or 30)
        return {"solution": f, "degree": f.degree}, coefficients_csv(f)
    rep = neumann_solve(problem, c.p if c.p is not None else 2.0,
                        c.options.get("max_iter", 200), c.options.get("tol", 1e-12),
                        degree or 128)
    table = None
    if "solution" in rep:
        check = c.options.get("check_degree", 30)
        oracle = taylor_ode_oracle(problem, check)
        rep["oracle_agreement"] = {"through": check,
                                   "max_difference": coefficient_agreement(rep["solution"],
                                                                           oracle, check)}
        table = coefficients_csv(rep["solution"])
    return rep, table


def _run_kernelcheck(c: RunConfig):
    if c.action == "bj":
        n = _need(c.n, "n")
        betas = c.options.get("beta") or [0.5, 1.0, 2.5, 7.0]
        rows = [row for beta in betas for m in range(1, n + 1) for row in leibniz_table(beta, m)]
        worst = max(row["relative"] for row in rows)
        table = table_csv({key: [row[key] for row in rows]
                           for key in ("beta", "n", "j", "b_j", "relative")})
        return {"rows": rows, "max_relative": worst}, table
    if c.action == "window":
        p_values = c.options.get("p_values") or ([c.p] if c.p else [1.0, 2.0, 4.0])
        rows = kernel_norm_sweep(_radii(c.options.get("w_max", 0.995)),
                                 c.options.get("i_max", 3), p_values, rule=c.rule())
        windows = ratio_windows(rows)
        out = {"rows": rows, "windows": windows,
               "max_spread": max(w["spread"] for w in windows)}
    else:
        p = c.p if c.p is not None else 2.0
        gamma = c.options.get("gamma") or 4.0
        rows = combination_sweep(_radii(c.options.get("w_max", 0.99)),
                                 c.options.get("n_max", 3), c.options.get("samples", 50),
                                 p, gamma, c.seed, c.rule())
        out = {"rows": rows, "min_ratio": min(row["ratio"] for row in rows), "p": p,
               "gamma": gamma}
    table = table_csv({"w_re": [row["w"].real for row in rows],
                       "w_im": [row["w"].imag for row in rows],
                       "ratio": [row["ratio"] for row in rows],
                       **({"i": [row["i"] for row in rows], "p": [row["p"] for row in rows]}
                          if c.action == "window" else {"n": [row["n"] for row in rows]})})
    return out, table


RUNNERS = {"norm": _run_norm, "lattice": _run_lattice, "carleson": _run_carleson,
           "volterra": _run_volterra, "compsum": _run_compsum, "ode": _run_ode,
           "kernelcheck": _run_kernelcheck}


def run(config: RunConfig) -> tuple[str, str | None]:
    """Execute a command; return the JSON report text and the CSV text.

    Raises
    ------
    LabError
        Any library error; its ``code`` and ``exit_status`` describe it.
    """
    config.validate()
    result, table = RUNNERS[config.command](config)
    report = {"command": config.command, "action": config.action,
              "config": config.to_dict(), "result": result}
    return dumps_report(report), table


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("USAGE", message)
        raise SystemExit(USAGE_STATUS)


def _complex_pair(text: str) -> tuple[float, float]:
    try:
        re_, im_ = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None
    return re_, im_


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("common")
    g.add_argument("--p", type=float)
    g.add_argument("--q", type=float)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--radial-n", type=int)
    g.add_argument("--angular-n", type=int)
    g.add_argument("--r-cut", type=float)
    g.add_argument("--r", type=float, default=1.0, help="lattice radius (default 1)")
    g.add_argument("--r-max", type=float, default=0.999, help="lattice region (default 0.999)")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="JSON report path (default stdout)")
    g.add_argument("--csv", help="CSV table path")
    g.add_argument("--decay-fraction", type=float, default=0.05)
    g.add_argument("--slope-tol", type=float, default=0.1)
    g.add_argument("--tail-rings", type=int, default=4)
    g.add_argument("--stability-tol", type=float, default=STABILITY_TOL)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bergman-lab",
                     description="Bergman-space norms, Carleson tests and operator checks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("norm", help="A^p, Littlewood-Paley or Bloch-type norm")
    p.add_argument("--fn", required=True, help="function spec (JSON)")
    p.add_argument("--kind", choices=("ap", "lp", "bloch"), default="ap")
    p.add_argument("--m", type=int, default=1, help="Bloch derivative order")
    p.add_argument("--alpha", type=float, default=1.0, help="Bloch weight exponent")
    _common(p)

    p = sub.add_parser("lattice", help="build and certify an r-lattice")
    _common(p)

    p = sub.add_parser("carleson", help="Carleson statistics")
    p.add_argument("action", choices=ACTIONS["carleson"])
    p.add_argument("--measure", help="measure atoms (CSV z_re,z_im,weight)")
    p.add_argument("--weighted-area", type=float, metavar="T",
                   help="use (1-|z|^2)^T dA instead of a file")
    p.add_argument("--u", nargs="+", help="symbol specs u_0 .. u_n (sobolev)")
    p.add_argument("--family-size", type=int, default=8)
    _common(p)

    p = sub.add_parser("volterra", help="Volterra-type operators")
    p.add_argument("action", choices=ACTIONS["volterra"])
    p.add_argument("--op", required=True, help="operator spec (JSON)")
    p.add_argument("--fn", help="function spec (apply)")
    p.add_argument("--degree", type=int, default=256)
    p.add_argument("--levels", type=int, default=7)
    _common(p)

    p = sub.add_parser("compsum", help="sums of weighted composition-differentiation operators")
    p.add_argument("action", choices=ACTIONS["compsum"])
    p.add_argument("--op", required=True, help="operator spec (JSON)")
    p.add_argument("--fn", help="function spec (apply)")
    p.add_argument("--at", type=_complex_pair, action="append", help="evaluation point re,im")
    p.add_argument("--basis-size", type=int, default=200)
    p.add_argument("--samples", type=int, default=50, help="adjoint-identity samples")
    p.add_argument("--resolution", type=int, default=1, help="pull-back grid refinement")
    p.add_argument("--levels", type=int, default=7)
    _common(p)

    p = sub.add_parser("ode", help="linear ODE solver and series oracle")
    p.add_argument("action", choices=ACTIONS["ode"])
    p.add_argument("--problem", required=True, help="problem spec (JSON)")
    p.add_argument("--degree", type=int)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--check-degree", type=int, default=30)
    _common(p)

    p = sub.add_parser("kernelcheck", help="kernel estimates and identities")
    p.add_argument("action", choices=ACTIONS["kernelcheck"])
    p.add_argument("--beta", type=float, action="append")
    p.add_argument("--p-values", type=float, nargs="+")
    p.add_argument("--i-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--gamma", type=float)
    p.add_argument("--w-max", type=float)
    _common(p)
    return parser


_OPTION_KEYS = {
    "norm": ("kind", "m", "alpha"),
    "carleson": ("weighted_area", "family_size"),
    "volterra": ("degree", "levels"),
    "compsum": ("at", "basis_size", "samples", "resolution", "levels"),
    "ode": ("degree", "tol", "max_iter", "check_degree"),
    "kernelcheck": ("beta", "p_values", "i_max", "n_max", "samples", "gamma", "w_max"),
}
_INPUT_KEYS = ("fn", "op", "measure", "u", "problem")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    ns = vars(args)
    options = {key: ns[key] for key in _OPTION_KEYS.get(args.command, ()) if ns.get(key) is not None}
    if "at" in options:
        options["at"] = [list(xy) for xy in options["at"]]
    return RunConfig(
        command=args.command, action=ns.get("action"),
        inputs={key: ns[key] for key in _INPUT_KEYS if ns.get(key) is not None},
        p=args.p, q=args.q, n=args.n, k=args.k, radial_n=args.radial_n,
        angular_n=args.angular_n, r_cut=args.r_cut, r=args.r, r_max=args.r_max,
        seed=args.seed, out=args.out, csv=args.csv, options=options,
        thresholds=ProfileThresholds(args.decay_fraction, args.slope_tol, args.tail_rings),
        stability_tol=args.stability_tol)


def _emit_error(code: str, message: str) -> None:
    doc = {"error": {"code": code, "message": message}}
    sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    try:
        report, table = run(config)
        if config.out:
            write_text(config.out, report)
        else:
            sys.stdout.write(report)
        if config.csv and table is not None:
            write_text(config.csv, table)
    except LabError as exc:
        _emit_error(exc.code, str(exc))
        return exc.exit_status
    except OSError as exc:
        _emit_error("INPUT", f"{exc.filename}: {exc.strerror}")
        return InputError.exit_status
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
