"""Command-line front end.

Exit codes: 0 success, 1 usage error or malformed input, 2 input outside
the required domain, 3 inconclusive search, 4 any other library failure
(including a failed ``--selftest``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bergman, selftest, spectral, sympoly
from .errors import BudgetExceeded, DomainError, Inconclusive, SymdiscError
from .metrics import appendix_c, circle, discs, extremal, pick

SCHEMA = "symdisc/1"
DEFAULT_SEED = 0

TOLERANCES = {
    "boundary": sympoly.BOUNDARY_TOL,
    "separation": bergman.SEPARATION_TOL,
    "psd": pick.PSD_RTOL,
    "quality": 1e-6,
}


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    tolerances: dict[str, float] = field(default_factory=lambda: dict(TOLERANCES))
    seed: int = DEFAULT_SEED
    eval_budget: int | None = None
    output_format: str = "json"
    workers: int | None = None

    def set_tolerance(self, name: str, value: float):
        if name not in TOLERANCES:
            raise UsageError(f"unknown tolerance {name!r} (known: {', '.join(sorted(TOLERANCES))})")
        if not (math.isfinite(value) and value > 0):
            raise UsageError(f"tolerance {name} must be a positive number")
        self.tolerances[name] = value


# -- argument grammar ---------------------------------------------------------------

def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty number")
    if s[-1] in "ij":
        body = s[:-1]
        if body == "" or body[-1] in "+-":
            body += "1"
        s = body + "j"
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite number {text!r}")
    return z


def parse_point(text: str) -> np.ndarray:
    return np.array([parse_complex(t) for t in text.split(",")], dtype=complex)


def parse_matrix(text: str) -> np.ndarray:
    rows = [parse_point(r) for r in text.split(";")]
    if len({r.size for r in rows}) != 1 or len(rows) != rows[0].size:
        raise ValueError("matrix must be square, rows separated by ';'")
    return np.array(rows)


def parse_real(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {text!r}")
    return x


def _typed(fn, what):
    def conv(text):
        try:
            return fn(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad {what} {text!r}: {exc}") from None

    conv.__name__ = what
    return conv


POINT = _typed(parse_point, "point")
MATRIX = _typed(parse_matrix, "matrix")
COMPLEX = _typed(parse_complex, "complex number")
REAL = _typed(parse_real, "number")


# -- output ----------------------------------------------------------------------

def format_complex(z: complex) -> str:
    re, im = z.real + 0.0, z.imag + 0.0
    return f"{re:.15g}{im:+.15g}i"


def plain(v):
    """JSON-ready copy with floats cut to 15 significant digits."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(f"{v:.15g}") if math.isfinite(v) else str(v)
    if isinstance(v, (complex, np.complexfloating)):
        return format_complex(complex(v))
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, np.ndarray):
        return [plain(x) for x in v.tolist()] if v.ndim else plain(v.item())
    if isinstance(v, dict):
        return {str(k): plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [plain(x) for x in v]
    return v


@dataclass
class Report:
    formula: str
    result: dict
    table: list[dict] | None = None


def render(command: str, rep: Report, cfg: RunConfig) -> str:
    if cfg.output_format == "json":
        doc = {"schema": SCHEMA, "command": command, "formula": rep.formula, "seed": cfg.seed,
               "result": plain(rep.result)}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    if cfg.output_format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if rep.table:
            cols = list(rep.table[0])
            w.writerow(cols)
            for row in rep.table:
                w.writerow([row[c] for c in cols])
        else:
            w.writerow(["key", "value"])
            for k, v in plain(rep.result).items():
                w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
        return buf.getvalue()
    buf.write(f"{command}: {rep.formula}\n")
    for k, v in plain(rep.result).items():
        buf.write(f"  {k}: {v}\n")
    return buf.getvalue()


# -- subcommands -------------------------------------------------------------------

def cmd_membership(a, cfg):
    z = a.point
    if a.n is not None and a.n != z.size:
        raise UsageError(f"--n {a.n} does not match a point with {z.size} coordinates")
    rep = sympoly.root_location(sympoly.poly_from_point(z), cfg.tolerances["boundary"])
    return Report(
        "z in G_n iff all roots of the attached polynomial lie in the disc (Cohn rule)",
        {"n": z.size, "inside": rep.inside, "h": sympoly.minkowski_h(z), "cohn_margin": rep.margin,
         "cohn_steps": rep.steps, "boundary": rep.boundary},
    )


def cmd_minkowski(a, cfg):
    z = a.point
    return Report(
        "h(sigma(xi)) = max |xi_j|",
        {"n": z.size, "h": sympoly.minkowski_h(z), "h_bisection": sympoly.minkowski_h_bisect(z)},
    )


def cmd_kernel(a, cfg):
    k = bergman.kernel_Gn(a.lam, a.mu, cfg.tolerances["separation"])
    out = {"n": a.lam.size, "kernel": k, "abs": abs(k)}
    if a.lam.size == 2:
        out["closed_form_G2"] = bergman.kernel_G2_closed(a.lam, a.mu)
    return Report("K(sigma(lam), sigma(mu)) = det[(1 - lam_j conj(mu_k))^-2] / (pi^n V(lam) conj(V(mu)))", out)


def cmd_kernel_zero(a, cfg):
    w = bergman.construct_kernel_zero_G3(quality_tol=cfg.tolerances["quality"], seed=cfg.seed)
    return Report(
        "zero of K_{G_3} near nu_0 with mu_3 = 0 from the quadratic a z^2 - b z + 2c",
        {"lam": w.lam, "mu": w.mu, "kernel": w.kernel_value, "quality": w.quality, "z": w.z, "eps": w.eps,
         "quad_residual": w.quad_residual,
         "separation": min(bergman.min_separation(w.lam), bergman.min_separation(w.mu))},
    )


def cmd_cyclicity(a, cfg):
    v = spectral.cyclicity(a.matrix, seed=cfg.seed)
    return Report("equivalent characterisations of a cyclic matrix", {**v.breakdown(), "cyclic": v.consensus})


def cmd_sigma_prime(a, cfg):
    if a.direction.shape != a.matrix.shape:
        raise UsageError("--direction must have the shape of --matrix")
    return Report("d/dt sigma(A + tB) at t = 0", {"sigma_prime": spectral.sigma_prime(a.matrix, a.direction)})


def cmd_mobius(a, cfg):
    phi = spectral.mobius_phi(a.lam, a.matrix)
    ev = spectral.eigenvalues(a.matrix)
    return Report(
        "Phi_lam(A) = (A - lam I)(I - conj(lam) A)^-1",
        {"phi": phi, "spectral_radius": spectral.spectral_radius(phi),
         "max_mobius_eigen": max(spectral.m_disc(a.lam, e) for e in ev)},
    )


def cmd_bounds(a, cfg):
    n, k = a.n, a.k
    if not 1 <= k <= n:
        raise UsageError("need 1 <= k <= n")
    ek = np.zeros(n, dtype=complex)
    ek[k - 1] = 1
    out = {"n": n, "k": k, "rho": circle.rho_n(ek),
           "kappa_upper": extremal.kappa_ek_upper(n, k) if n % k == 0 else None}
    if k == 2 and n % 2 == 1 and n >= 3:
        sw = extremal.e2_sandwich(n, seed=cfg.seed)
        out.update(lower=sw.lower_bound, lower_witness=sw.lower_witness, observed=sw.observed,
                   upper=sw.upper_bound, eps=sw.eps)
    if n == 3 and k == 2:
        out.update(C0=extremal.gamma3_e2_upper(), c_star=extremal.C_STAR)
    return Report("rho_n(e_k) <= gamma(0; e_k) <= kappa(0; e_k)", out)


CSV_COLUMNS = ("step", "g-max", "tita-1", "tita-2", "upper_bound", "certified")


def cmd_appendixc(a, cfg):
    rows = []
    budget = cfg.eval_budget or appendix_c.DEFAULT_BUDGET
    for s in a.step:
        r = appendix_c.grid_search_appendixC(s, workers=cfg.workers, budget=budget)
        rows.append({
            "step": f"{r.step:.15f}", "g-max": f"{r.grid_max:.15f}",
            "tita-1": f"{r.argmax[0]:.10f}", "tita-2": f"{r.argmax[1]:.10f}",
            "upper_bound": f"{r.global_upper_bound:.15f}", "certified": str(r.certified_below is not None).lower(),
        })
    res = {"rows": [{c: row[c] for c in CSV_COLUMNS} for row in rows]}
    return Report("max over a grid of |0.675 g2^2 - 0.291 g2 g1^2 + 0.033 g1^4| plus L step / 2", res, rows)


def cmd_certify(a, cfg):
    if a.objective.lower() != "appendixc":
        raise UsageError("only --objective appendixc is available")
    c = appendix_c.certified_max_bb(L=a.lipschitz, target=a.target, workers=cfg.workers,
                                    budget=cfg.eval_budget or 200_000_000)
    out = {"target": a.target, "certified_below": c.certified_below, "disproof": c.disproof,
           "best": c.grid_max, "argmax": list(c.argmax), "global_upper_bound": c.global_upper_bound,
           "lipschitz": c.lipschitz, "evaluations": c.evaluations}
    if c.ledger is not None:
        path = c.ledger.save(a.ledger)
        out.update(leaves=c.ledger.leaf_count, finest_step=c.step, ledger=str(Path(path).resolve()))
        if a.verify:
            out["replayed"] = appendix_c.verify_certificate(appendix_c.BoxLedger.load(path))
        if c.certified_below is not None and c.certified_below <= 1:
            out["C1"] = appendix_c.caratheodory_gamma2_G3_lower(c).value
    return Report("Lipschitz branch-and-bound, bound |g(center)| + L * half-width", out)


def cmd_pick(a, cfg):
    tol = cfg.tolerances["psd"]
    if a.beta is not None:
        if a.deltas is None or a.nus is None:
            raise UsageError("--beta needs --deltas and --nus")
        ok = pick.np_solvable_circle(a.beta, a.deltas, a.nus, tol)
        return Report("A(beta) = [(1 - nu_j conj(nu_k)) / (1 - delta_j conj(delta_k) |beta|^2)] >= 0",
                      {"solvable": ok, "nodes": a.deltas * a.beta})
    if a.nodes is None or a.targets is None:
        raise UsageError("give --nodes and --targets, or --beta with --deltas and --nus")
    prob = pick.PickProblem(a.nodes, a.targets)
    return Report("[(1 - w_j conj(w_k)) / (1 - z_j conj(z_k))] >= 0", {"solvable": pick.np_solvable(prob, tol)})


def cmd_nonconvex_witness(a, cfg):
    build = extremal.witness_n3 if a.n == 3 else extremal.witness_n4
    w = build() if a.q1 is None else build(a.q1)
    fn = extremal.r3 if a.n == 3 else extremal.s4
    return Report(
        "midpoint of two boundary points of the slice zeta^n + p zeta + q lies outside",
        {"n": w.n, "boundary_1": list(w.boundary[0]), "boundary_2": list(w.boundary[1]),
         "midpoint": list(w.midpoint), "modulus_sum": w.modulus_sum, "closed_form_sum": w.closed_form_sum,
         "defining_function_at_midpoint": w.defining_value, "defining_function_at_boundary": list(w.boundary_values),
         "function": fn.__name__},
    )


def cmd_product_property(a, cfg):
    if a.poles.size != 2:
        raise UsageError("--poles takes exactly two points")
    r = discs.product_property_check(a.poles, a.theta)
    return Report(
        "l(A x e^{i theta} A, 0) <= |a_1 a_2| via zeta -> (zeta, e^{i theta} zeta)",
        {"lhs_upper": r.lhs_upper, "rhs": r.rhs, "equal": r.equal, "disc_points": list(r.disc_points),
         "interpolation_error": r.interpolation_error},
    )


# (handler, selftest suite, required options)
COMMANDS = {
    "membership": (cmd_membership, "sympoly", ("point",)),
    "minkowski": (cmd_minkowski, "sympoly", ("point",)),
    "kernel": (cmd_kernel, "bergman", ("lam", "mu")),
    "kernel-zero": (cmd_kernel_zero, "bergman", ()),
    "cyclicity": (cmd_cyclicity, "spectral", ("matrix",)),
    "sigma-prime": (cmd_sigma_prime, "spectral", ("matrix", "direction")),
    "mobius": (cmd_mobius, "spectral", ("lam", "matrix")),
    "bounds": (cmd_bounds, "metrics", ("n",)),
    "appendixc": (cmd_appendixc, "metrics", ()),
    "certify": (cmd_certify, "metrics", ()),
    "pick": (cmd_pick, "metrics", ()),
    "nonconvex-witness": (cmd_nonconvex_witness, "metrics", ()),
    "product-property": (cmd_product_property, "metrics", ("poles",)),
}


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--config", type=Path, help="key=value file (seed, budget, workers, format, tol.NAME)")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--budget", type=int, help="evaluation budget for the searches")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help=f"tolerance override; names: {', '.join(TOLERANCES)}")
    common.add_argument("--selftest", action="store_true", help="run the elementary checks of the module")

    p = Parser(prog="symdisc", description="Computations on the symmetrized polydisc and the spectral ball.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=Parser)
    sp = {name: sub.add_parser(name, parents=[common]) for name in COMMANDS}

    for name in ("membership", "minkowski"):
        sp[name].add_argument("--point", type=POINT, help='e.g. "0.1,0.2,0.05i"')
    sp["membership"].add_argument("--n", type=int)
    sp["kernel"].add_argument("--lam", type=POINT)
    sp["kernel"].add_argument("--mu", type=POINT)
    for name in ("cyclicity", "sigma-prime", "mobius"):
        sp[name].add_argument("--matrix", type=MATRIX, help='rows split by ";", e.g. "0,1;0,0"')
    sp["sigma-prime"].add_argument("--direction", type=MATRIX)
    sp["mobius"].add_argument("--lam", type=COMPLEX)
    sp["bounds"].add_argument("--n", type=int)
    sp["bounds"].add_argument("--k", type=int, default=2)
    sp["appendixc"].add_argument("--step", type=REAL, nargs="+", default=[1e-3])
    sp["certify"].add_argument("--objective", default="appendixc")
    sp["certify"].add_argument("--target", type=REAL, default=1.0)
    sp["certify"].add_argument("--lipschitz", type=REAL, default=appendix_c.LIPSCHITZ)
    sp["certify"].add_argument("--ledger", default="appendixc_ledger.npz")
    sp["certify"].add_argument("--verify", action="store_true", help="replay the ledger after saving it")
    sp["pick"].add_argument("--nodes", type=POINT)
    sp["pick"].add_argument("--targets", type=POINT)
    sp["pick"].add_argument("--beta", type=COMPLEX)
    sp["pick"].add_argument("--deltas", type=POINT)
    sp["pick"].add_argument("--nus", type=POINT)
    sp["nonconvex-witness"].add_argument("--n", type=int, choices=(3, 4), default=3)
    sp["nonconvex-witness"].add_argument("--q1", type=REAL)
    sp["product-property"].add_argument("--poles", type=POINT)
    sp["product-property"].add_argument("--theta", type=REAL, default=0.0)
    return p


def read_config(path: Path, cfg: RunConfig):
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep:
            raise UsageError(f"{path}:{num}: expected key=value")
        value = value.strip("\"'")
        try:
            if key == "seed":
                cfg.seed = int(value)
            elif key == "budget":
                cfg.eval_budget = int(value)
            elif key == "workers":
                cfg.workers = int(value)
            elif key == "format":
                if value not in ("json", "csv", "text"):
                    raise UsageError(f"{path}:{num}: unknown format {value!r}")
                cfg.output_format = value
            elif key.startswith("tol."):
                cfg.set_tolerance(key[4:], float(value))
            else:
                raise UsageError(f"{path}:{num}: unknown key {key!r}")
        except ValueError:
            raise UsageError(f"{path}:{num}: bad value for {key}") from None


def make_config(a) -> RunConfig:
    cfg = RunConfig()
    if a.config is not None:
        read_config(a.config, cfg)
    env = os.environ.get("SYMDISC_SEED")
    if env is not None:
        try:
            cfg.seed = int(env)
        except ValueError:
            raise UsageError(f"SYMDISC_SEED must be an integer, got {env!r}") from None
    if a.seed is not None:
        cfg.seed = a.seed
    if a.budget is not None:
        cfg.eval_budget = a.budget
    if a.workers is not None:
        cfg.workers = a.workers
    if a.format is not None:
        cfg.output_format = a.format
    for item in a.tol:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            cfg.set_tolerance(name, float(value))
        except ValueError:
            raise UsageError(f"bad tolerance value {value!r}") from None
    if cfg.eval_budget is not None and cfg.eval_budget <= 0:
        raise UsageError("budget must be positive")
    if cfg.workers is not None and cfg.workers <= 0:
        raise UsageError("workers must be positive")
    return cfg


def run_selftest(command: str, suite: str, cfg: RunConfig) -> int:
    results = selftest.run(suite)
    ok = all(r[1] for r in results)
    rep = Report(f"elementary checks of {suite}",
                 {"passed": ok, "checks": {label: passed for label, passed, _ in results}})
    sys.stdout.write(render(command, rep, cfg))
    for label, passed, note in results:
        if not passed:
            print(f"selftest {label}: failed {note}".rstrip(), file=sys.stderr)
    return 0 if ok else 4


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        cfg = make_config(a)
        handler, suite, required = COMMANDS[a.command]
        if a.selftest:
            return run_selftest(a.command, suite, cfg)
        missing = [r for r in required if getattr(a, r) is None]
        if missing:
            raise UsageError("missing " + ", ".join("--" + m for m in missing))
        rep = handler(a, cfg)
    except (UsageError, ValueError) as exc:
        print(f"symdisc: error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"symdisc: domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (Inconclusive, BudgetExceeded) as exc:
        print(f"symdisc: inconclusive: {exc}", file=sys.stderr)
        return 3
    except SymdiscError as exc:
        print(f"symdisc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    sys.stdout.write(render(a.command, rep, cfg))
    return 0


if __name__ == "__main__":
    sys.exit(main())
