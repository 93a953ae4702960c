"""Command-line front end.

Each subcommand takes its parameters from a flat JSON document (``--config``)
and/or flags; flags win.  Exit codes: 0 success, 1 a check failed, 2 invalid
input, 3 numerical failure.  Failures print a JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import numpy as np

__all__ = ["main", "run", "emit_plot", "ValidationError", "NumericalFailure"]

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3


class ValidationError(ValueError):
    pass


class NumericalFailure(RuntimeError):
    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# --- parameter parsing --------------------------------------------------------

def _complex(s) -> complex:
    if isinstance(s, (int, float)):
        return complex(s)
    if isinstance(s, dict) and set(s) == {"re", "im"}:
        return complex(float(s["re"]), float(s["im"]))
    return complex(str(s).replace(" ", "").replace("i", "j"))


def _pair(s) -> tuple[float, float]:
    vals = s if isinstance(s, (list, tuple)) else str(s).split(",")
    if len(vals) != 2:
        raise ValueError("expected two comma-separated numbers")
    return float(vals[0]), float(vals[1])


def _complex_list(s) -> list[complex]:
    vals = s if isinstance(s, (list, tuple)) else [v for v in str(s).split(",") if v]
    return [_complex(v) for v in vals]


def _bool(s) -> bool:
    if isinstance(s, bool):
        return s
    if str(s).lower() in ("1", "true", "yes"):
        return True
    if str(s).lower() in ("0", "false", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


@dataclass(frozen=True)
class Param:
    type: Callable[[Any], Any]
    default: Any = None
    help: str = ""
    flag: bool = False          # boolean switch without a value


COMMON = {
    "out": Param(str, None, "output file (.csv or .json)"),
    "plot": Param(str, None, "SVG plot file"),
    "seed": Param(int, 0, "seed for sampled inputs"),
}

COMMANDS: dict[str, dict[str, Param]] = {
    "spectrum": {
        "n_min": Param(int, 1, "first alpha = n"),
        "n_max": Param(int, 20, "last alpha = n"),
        "epsilon": Param(float, 0.5, "Agmon weight parameter"),
    },
    "gamma": {
        "n_min": Param(int, 8, "first alpha = n"),
        "n_max": Param(int, 20, "last alpha = n"),
    },
    "phi": {
        "alpha": Param(_complex, None, "alpha (complex, required)"),
        "rho": Param(_complex, 0j, "evaluation point"),
        "epsilon": Param(float, 0.5, "keyhole radius"),
        "solve": Param(_bool, False, "also solve Phi(rho) = 0 by guarded Newton", True),
    },
    "kernel": {
        "symbol": Param(str, "exp", "one, z, z2, exp, xexp or recip"),
        "zeta": Param(_complex_list, None, "comma-separated evaluation points"),
        "random_points": Param(int, 0, "additional seeded points off the cut"),
        "radius_max": Param(float, 3.0, "largest |zeta| for random points"),
        "tol": Param(float, 1e-9, "tail tolerance"),
    },
    "falsify": {
        "variant": Param(str, None, "toy, line, strip or rectangle (required)"),
        "T": Param(float, None, "time horizon"),
        "band": Param(_pair, None, "removed band a,b"),
        "delta": Param(float, None, "neighbourhood radius"),
        "z0_modulus": Param(float, None, "|z0|"),
        "theta": Param(float, None, "arg z0"),
        "N": Param(int, None, "vanishing order"),
        "k_min": Param(int, None, "first k"),
        "k_max": Param(int, None, "last k"),
        "degree_base": Param(int, None, "K0"),
        "degree_growth": Param(str, None, "doubling or linear"),
        "degree_step": Param(int, None, "degree step for linear growth"),
        "n_min": Param(int, None, "first mode"),
        "n_max": Param(int, None, "last mode"),
        "everywhere": Param(_bool, False, "observe on the full annulus", True),
    },
    "check": {
        "suite": Param(str, "all", "all or comma-separated check names"),
    },
}


_JSON_TYPES = {
    int: {"type": "integer"},
    float: {"type": "number"},
    str: {"type": "string"},
    _bool: {"type": "boolean"},
    _complex: {"type": ["number", "string", "object"]},
    _pair: {"type": ["string", "array"]},
    _complex_list: {"type": ["string", "array"]},
}


def config_schema() -> dict:
    """JSON schema of the flat ``--config`` document, one branch per subcommand."""
    branches = []
    for name, params in COMMANDS.items():
        props = {"command": {"const": name}}
        for key, prm in {**params, **COMMON}.items():
            props[key] = {**_JSON_TYPES[prm.type], "description": prm.help}
        branches.append({"type": "object", "properties": props, "additionalProperties": False})
    return {"$schema": "https://json-schema.org/draft/2020-12/schema",
            "title": "run configuration", "anyOf": branches}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grushin", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, params in COMMANDS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="flat JSON document of parameters")
        for key, prm in {**params, **COMMON}.items():
            flag = "--" + key.replace("_", "-")
            if prm.flag:
                sp.add_argument(flag, dest=key, action="store_const", const=True,
                                default=None, help=prm.help)
            else:
                sp.add_argument(flag, dest=key, default=None, help=prm.help)
    return p


def resolve_parameters(command: str, config: dict, flags: dict) -> dict:
    """Defaults, then the config document, then flags; every value is converted."""
    params = {**COMMANDS[command], **COMMON}
    config = dict(config)
    if config.pop("command", command) != command:
        raise ValidationError("config 'command' does not match the subcommand")
    unknown = sorted(set(config) - set(params))
    if unknown:
        raise ValidationError(f"unknown configuration keys: {unknown}")
    out = {k: p.default for k, p in params.items()}
    for source in (config, {k: v for k, v in flags.items() if v is not None}):
        for k, v in source.items():
            if v is None:
                out[k] = None
                continue
            try:
                out[k] = params[k].type(v)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"bad value for {k}: {v!r} ({exc})") from None
    return out


# --- serialisation ---------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _jsonable(float(x.real)), "im": _jsonable(float(x.imag))}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def dumps_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def load_schema(name: str) -> dict:
    return json.loads(resources.files("grushin").joinpath("schemas", f"{name}.schema.json")
                      .read_text())


def _validated_json(name: str, obj) -> str:
    import jsonschema
    text = dumps_json(obj)
    jsonschema.validate(json.loads(text), load_schema(name))
    return text


# --- plots --------------------------------------------------------------------

def emit_plot(kind: str, xs, ys, path: str) -> None:
    """Deterministic SVG: ``ratio`` (log scale vs k) or ``gamma`` (ratio vs n)."""
    xs, ys = list(xs), list(ys)
    if not xs:
        raise ValueError("cannot plot an empty report set")
    if kind not in ("ratio", "gamma"):
        raise ValueError("kind must be 'ratio' or 'gamma'")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    with matplotlib.rc_context({"svg.hashsalt": "grushin", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(xs, ys, "o-")
        if kind == "ratio":
            ax.set_yscale("log")
            ax.set_xlabel("k")
            ax.set_ylabel("LHS / RHS")
        else:
            ax.axhline(1.0, color="0.6", lw=0.8)
            ax.set_xlabel("n")
            ax.set_ylabel("gamma / asymptote")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


# --- commands -------------------------------------------------------------------

def _require_out(p: dict, allowed: tuple[str, ...]) -> str:
    out = p["out"]
    if not out:
        raise ValidationError("--out is required")
    if Path(out).suffix not in allowed:
        raise ValidationError(f"--out must end in one of {allowed}")
    return out


def _check_n_range(p: dict) -> None:
    if not 1 <= p["n_min"] <= p["n_max"] <= 700:
        raise ValidationError("need 1 <= n_min <= n_max <= 700")


SPECTRUM_COLUMNS = ["n", "lambda", "rho", "gamma_empirical", "gamma_over_asymptote",
                    "l2_norm", "agmon_sup"]
GAMMA_COLUMNS = SPECTRUM_COLUMNS[:5]
FALSIFY_COLUMNS = ["variant", "k", "lhs", "rhs", "ratio"]


def _cmd_spectrum(p: dict, gamma_only: bool = False):
    from .spectrum import spectral_record
    out = _require_out(p, (".csv",))
    _check_n_range(p)
    if not gamma_only and not 0 < p["epsilon"] <= 1:
        raise ValidationError("epsilon must lie in (0, 1]")
    eps = 0.5 if gamma_only else p["epsilon"]
    recs = [(n, spectral_record(float(n), eps)) for n in range(p["n_min"], p["n_max"] + 1)]
    cols = GAMMA_COLUMNS if gamma_only else SPECTRUM_COLUMNS
    rows = [[n, r.lam, r.rho, r.gamma_empirical, r.gamma_over_asymptote, r.l2_norm,
             r.agmon_sup][: len(cols)] for n, r in recs]
    files = {out: dumps_csv(cols, rows)}
    plot = ("gamma", [n for n, _ in recs], [r.gamma_over_asymptote for _, r in recs])
    return files, plot


def _cmd_phi(p: dict):
    from .implicit import PhiContext, phi_at_zero_closed_form, phi_derivatives, solve_rho
    out = _require_out(p, (".json",))
    if p["alpha"] is None:
        raise ValidationError("--alpha is required")
    try:
        ctx = PhiContext(p["alpha"], epsilon=p["epsilon"])
        d = phi_derivatives(p["rho"], ctx, 2)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    rec = {"alpha": ctx.alpha, "rho": p["rho"], "epsilon": p["epsilon"],
           "phi": d[0], "dphi": d[1], "d2phi": d[2],
           "phi_at_zero_closed_form": phi_at_zero_closed_form(ctx.alpha), "solve": None}
    if p["solve"]:
        s = solve_rho(ctx)
        if not s.newton.converged:
            raise NumericalFailure("Newton did not converge",
                                   {"residuals": s.newton.residuals})
        rec["solve"] = {"rho_tilde": s.rho_tilde, "lambda": s.lam, "gamma": s.gamma,
                        "iterations": len(s.newton.iterates) - 1,
                        "certificate_admissible": s.certificate.admissible,
                        "stop_reason": s.newton.stop_reason}
    return {out: _validated_json("phi", rec)}, None


def _random_points(kc, n: int, rmax: float, seed: int) -> list[complex]:
    """Seeded points away from the cut and well inside the continuation domain."""
    from .symbols import in_continuation_domain
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        z = cmath.rect(rng.uniform(0.1, rmax), rng.uniform(-math.pi, math.pi))
        if (abs(z.imag) >= 0.2 or z.real < 0.8) and in_continuation_domain(kc, z, 0.05):
            pts.append(z)
    return pts


def _cmd_kernel(p: dict):
    from .symbols import (builtin_symbol, in_continuation_domain, kernel_evaluate,
                          make_kernel_continuation)
    out = _require_out(p, (".json", ".csv"))
    if p["random_points"] < 0 or not p["radius_max"] > 0.1:
        raise ValidationError("random_points >= 0 and radius_max > 0.1 required")
    try:
        kc = make_kernel_continuation(builtin_symbol(p["symbol"]))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    pts = list(p["zeta"] or []) + _random_points(kc, p["random_points"], p["radius_max"],
                                                 p["seed"])
    if not pts:
        raise ValidationError("give --zeta or --random-points")
    for z in pts:
        if z.imag == 0 and z.real >= 1:
            raise ValidationError(f"zeta = {z} lies on the cut [1, inf)")
        if not in_continuation_domain(kc, z):
            raise ValidationError(f"zeta = {z} is outside the continuation domain")
    evs = [kernel_evaluate(kc, z, p["tol"]) for z in pts]
    if out.endswith(".csv"):
        rows = [[z.real, z.imag, e.value.real, e.value.imag, e.accelerated_tail_bound,
                 e.raw_tail_bound] for z, e in zip(pts, evs)]
        text = dumps_csv(["zeta_re", "zeta_im", "value_re", "value_im",
                          "accelerated_tail_bound", "raw_tail_bound"], rows)
    else:
        recs = [{"zeta": z, "value": e.value, "poisson_sum": e.poisson_sum, "k_max": e.k_max,
                 "accelerated_tail_bound": e.accelerated_tail_bound,
                 "raw_tail_bound": e.raw_tail_bound} for z, e in zip(pts, evs)]
        text = _validated_json("kernel", {"symbol": p["symbol"], "n1": kc.n1, "points": recs})
    return {out: text}, None


def falsify_config(p: dict):
    from .falsifier import VARIANTS, default_config
    if p["variant"] not in VARIANTS:
        raise ValidationError(f"--variant must be one of {VARIANTS}")
    keys = ("T", "band", "delta", "z0_modulus", "theta", "N", "degree_base", "degree_growth",
            "degree_step", "n_min", "n_max")
    over = {k: p[k] for k in keys if p[k] is not None}
    over["observe_everywhere"] = bool(p["everywhere"])
    try:
        base = default_config(p["variant"], **over)
        lo = base.k_range[0] if p["k_min"] is None else p["k_min"]
        hi = base.k_range[-1] if p["k_max"] is None else p["k_max"]
        if not 0 <= lo <= hi <= 40:
            raise ValueError("need 0 <= k_min <= k_max <= 40")
        return default_config(p["variant"], k_range=tuple(range(lo, hi + 1)), **over)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def _cmd_falsify(p: dict):
    from .falsifier import sweep
    out = _require_out(p, (".json", ".csv"))
    cfg = falsify_config(p)
    reps = sweep(cfg)
    if out.endswith(".csv"):
        text = dumps_csv(FALSIFY_COLUMNS, [[r.variant, r.k, r.lhs, r.rhs, r.ratio] for r in reps])
    else:
        text = _validated_json("falsify", [
            {"variant": r.variant, "k": r.k, "degree": r.degree, "lhs": r.lhs, "rhs": r.rhs,
             "ratio": r.ratio, "modal_coefficients_digest": r.modal_coefficients_digest,
             "diagnostics": r.diagnostics} for r in reps])
    plot = ("ratio", [r.k for r in reps], [r.ratio for r in reps])
    return {out: text}, plot


def _cmd_check(p: dict):
    from .checks import CHECKS, run_checks
    names = list(CHECKS) if p["suite"] == "all" else [s for s in p["suite"].split(",") if s]
    unknown = [n for n in names if n not in CHECKS]
    if unknown or not names:
        raise ValidationError(f"unknown checks: {unknown}; available: {list(CHECKS)}")
    if p["out"]:
        _require_out(p, (".json",))
    results = run_checks(names)
    for r in results:
        print(r.line())
    files = {}
    if p["out"]:
        files[p["out"]] = _validated_json("check", [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results])
    status = EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED
    return files, None, status


HANDLERS = {
    "spectrum": _cmd_spectrum,
    "gamma": lambda p: _cmd_spectrum(p, gamma_only=True),
    "phi": _cmd_phi,
    "kernel": _cmd_kernel,
    "falsify": _cmd_falsify,
    "check": _cmd_check,
}


def _error(code: int, kind: str, message: str, diagnostics: dict | None = None) -> int:
    rec = {"status": "error", "exit_code": code, "kind": kind, "message": message,
           "diagnostics": diagnostics or {}}
    sys.stderr.write(dumps_json(rec))
    return code


def run(argv: list[str] | None = None) -> int:
    from .contour import QuadratureError
    from .falsifier import FalsifierError
    from .newton import NewtonError
    from .spectrum import BracketError
    from .symbols import KernelTailError

    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else _error(
            EXIT_INVALID, "validation", "could not parse the command line")
    flags = vars(ns)
    command = flags.pop("command")
    config_path = flags.pop("config")
    try:
        config = {}
        if config_path:
            try:
                config = json.loads(Path(config_path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ValidationError(f"cannot read config: {exc}") from None
            if not isinstance(config, dict):
                raise ValidationError("config must be a JSON object")
        params = resolve_parameters(command, config, flags)
        if params["plot"] and command in ("phi", "kernel", "check"):
            raise ValidationError(f"{command} has no plot")
        result = HANDLERS[command](params)
    except ValidationError as exc:
        return _error(EXIT_INVALID, "validation", str(exc))
    except NumericalFailure as exc:
        return _error(EXIT_NUMERICAL, "numerical", str(exc), exc.diagnostics)
    except KernelTailError as exc:
        ev = exc.evaluation
        return _error(EXIT_NUMERICAL, "numerical", str(exc),
                      {"accelerated_tail_bound": ev.accelerated_tail_bound,
                       "raw_tail_bound": ev.raw_tail_bound, "k_max": ev.k_max})
    except QuadratureError as exc:
        return _error(EXIT_NUMERICAL, "numerical", str(exc),
                      {"best_value": exc.best.value, "error_estimate": exc.best.error_estimate})
    except (NewtonError, FalsifierError, BracketError) as exc:
        return _error(EXIT_NUMERICAL, "numerical", f"{type(exc).__name__}: {exc}")
    files, plot, *rest = result
    status = rest[0] if rest else EXIT_OK
    try:
        for path, text in files.items():
            Path(path).write_text(text)
        if params["plot"] and plot is not None:
            emit_plot(plot[0], plot[1], plot[2], params["plot"])
    except (OSError, ValueError) as exc:
        return _error(EXIT_NUMERICAL if isinstance(exc, OSError) else EXIT_INVALID,
                      "output", str(exc))
    return status


def main() -> None:
    sys.exit(run())
