"""Command-line front end.

Every computation is exposed as a batch subcommand that emits a single
JSON document or CSV table, optionally to a file; the `scan` report
additionally renders a PNG figure and a gnuplot script next to its CSV.
A run is fully determined by its effective configuration (flags merged
over an optional key=value config file, flags winning), and identical
configurations produce byte-identical output.

Exit codes: 0 success, 2 usage/validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional

from . import output as out
from .integrals import energy_series_from_w, w_coefficients
from .models import (
    MODEL_IDS,
    ModelSpec,
    branch_point,
    beta_series_numeric,
    delta_periodic_energy,
    exact_eigenvalue,
    implicit_energy_series,
    large_lambda,
)
from .numeric import NumericalError
from .periodic_box import PlaneWaveBasis, blowup_report, ground_energy_diag, rspt_coefficients
from .series import EnergySeries
from .summation import pade, quadratic_pade, radius_estimate, two_point_pade

PROG = "wellpert"


def _fraction_or_none(text: Optional[str]):
    if text is None:
        return None
    return Fraction(text)


def _read_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _merge(args: argparse.Namespace, table: dict) -> dict:
    """Resolve each option: explicit flag > config file > default.

    ``table`` maps attribute name -> (config key, converter, default).
    Returns the effective configuration echoed into result documents.
    """
    config = _read_config(getattr(args, "config", None))
    effective = {}
    known = {entry[0] for entry in table.values()}
    for key in config:
        if key not in known:
            raise ValueError(f"unknown config key {key!r} (known: {sorted(known)})")
    for attr, (key, convert, default) in table.items():
        value = getattr(args, attr, None)
        if value is None:
            if key in config:
                value = convert(config[key])
            else:
                value = default
        setattr(args, attr, value)
        effective[key] = value if not isinstance(value, Fraction) else str(value)
    return effective


def _emit(args, command: str, config: dict, payload: dict, notes: dict,
          header, rows) -> int:
    if args.format == "json":
        text = out.dump_json(out.result_document(command, config, payload, notes))
    else:
        text = out.dump_csv(header, rows)
    if args.output:
        out.write_text_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def _add_common(parser) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default json)")
    parser.add_argument("--output", default=None, metavar="PATH",
                        help="write to PATH instead of standard output")
    parser.add_argument("--config", default=None, metavar="FILE",
                        help="key=value file merged under explicit flags (flags win)")


COMMON_TABLE = {
    "format": ("format", str, "json"),
    "output": ("output", str, None),
}


def _check_model(model) -> None:
    if model is None:
        raise ValueError("a model is required: pass --model or set model= in the config file")
    if model not in MODEL_IDS:
        raise ValueError(f"unknown model {model!r} (choose from {MODEL_IDS})")


def _series_coeff_rows(series) -> list:
    return [(k, c) for k, c in enumerate(series.coeffs)]


# -- subcommand implementations ----------------------------------------------


def _cmd_series(args) -> int:
    table = dict(COMMON_TABLE)
    table.update({
        "model": ("model", str, None),
        "method": ("method", str, "implicit"),
        "order": ("order", int, 6),
        "beta": ("beta", float, 1.0),
        "L": ("L", Fraction, None),
    })
    config = _merge(args, table)
    _check_model(args.model)
    if args.method not in ("implicit", "beta", "lseries"):
        raise ValueError(f"unknown method {args.method!r}")
    if args.order < 1:
        raise ValueError("order must be positive")
    notes = {"method": args.method}
    if args.method == "implicit":
        if args.L is not None and args.model != "delta":
            raise ValueError("only the pointlike well has an exact box series; drop --L")
        model = ModelSpec(id=args.model, L=args.L)
        es = implicit_energy_series(model, args.order, exact=True)
        notes["domain"] = "rational"
    elif args.method == "lseries":
        if args.model != "delta":
            raise ValueError("--method lseries applies to the pointlike well only")
        if args.L is None:
            raise ValueError("--method lseries needs --L")
        es = implicit_energy_series(ModelSpec(id="delta", L=args.L), args.order, exact=True)
        notes["domain"] = "rational"
        notes["L"] = str(args.L)
    else:
        if args.model != "square":
            raise ValueError("the delta-regularized series is defined for the square well")
        es = beta_series_numeric(args.beta, args.order)
        notes["domain"] = "float"
        notes["beta"] = out.format_float(args.beta)
    payload = {"series": out.encode_energy_series(es)}
    return _emit(args, "series", config, payload, notes,
                 ["order", "coefficient"], _series_coeff_rows(es.series))


def _cmd_tmethod(args) -> int:
    table = dict(COMMON_TABLE)
    table.update({
        "model": ("model", str, None),
        "order": ("order", int, 4),
    })
    config = _merge(args, table)
    _check_model(args.model)
    if not 1 <= args.order <= 4:
        raise ValueError("the direct integrals stop at order 4")
    w = w_coefficients(ModelSpec(id=args.model), jmax=args.order)
    es = energy_series_from_w(w)
    payload = {
        "w": {
            "values": [out.format_float(v) for v in w.values],
            "error_estimates": [out.format_float(e) for e in w.errors],
        },
        "energy_series": out.encode_energy_series(es),
    }
    notes = {"integration": "ordered-simplex Gauss-Legendre" if args.model != "delta"
             else "analytic (pointlike profile)"}
    rows = [("w", j + 1, v, e) for j, (v, e) in enumerate(zip(w.values, w.errors))]
    rows += [("epsilon", k, c, None) for k, c in enumerate(es.series.coeffs) if k >= 2]
    return _emit(args, "tmethod", config, payload, notes,
                 ["quantity", "order", "value", "error_estimate"], rows)


def _cmd_lmethod(args) -> int:
    table = dict(COMMON_TABLE)
    table.update({
        "model": ("model", str, None),
        "L": ("L", float, None),
        "nmax": ("nmax", int, 100),
        "order": ("order", int, 3),
        "lam": ("lambda", float, None),
        "blowup_L": ("blowup-L", str, None),
    })
    config = _merge(args, table)
    _check_model(args.model)
    if args.blowup_L is not None:
        l_values = [Fraction(part) for part in args.blowup_L.split(",") if part]
        rows = blowup_report(ModelSpec(id=args.model), l_values, args.order,
                             n_max=args.nmax)
        payload = {
            "blowup": [
                {
                    "L": out.encode_number(r.L),
                    "j": r.j,
                    "coefficient": out.encode_number(r.coefficient),
                    "rescaled": out.encode_number(r.rescaled),
                    "exponent_fit": out.format_float(r.exponent_fit),
                }
                for r in rows
            ]
        }
        csv_rows = [(r.L, r.j, r.coefficient, r.rescaled, r.exponent_fit) for r in rows]
        return _emit(args, "lmethod", config, payload, {"report": "box-size blow-up"},
                     ["L", "j", "coefficient", "rescaled", "exponent_fit"], csv_rows)
    if args.L is None:
        raise ValueError("--L is required")
    basis = PlaneWaveBasis(L=args.L, n_max=args.nmax)
    result = rspt_coefficients(ModelSpec(id=args.model), basis, args.order)
    payload = {
        "rspt_coefficients": [out.format_float(c) for c in result.coefficients],
        "basis_size": result.basis_size,
    }
    notes = {"parity": "even_cosine", "L": out.format_float(args.L)}
    rows = [("rspt_coefficient", j + 1, c) for j, c in enumerate(result.coefficients)]
    rows.append(("basis_size", None, result.basis_size))
    if args.lam is not None:
        energy = ground_energy_diag(ModelSpec(id=args.model), basis, args.lam)
        payload["diag_energy"] = out.format_float(energy)
        payload["lambda"] = out.format_float(args.lam)
        rows.append(("diag_energy", None, energy))
    return _emit(args, "lmethod", config, payload, notes,
                 ["quantity", "order", "value"], rows)


def _cmd_exact(args) -> int:
    table = dict(COMMON_TABLE)
    table.update({
        "model": ("model", str, None),
        "lam": ("lambda", float, None),
        "n": ("n", int, 0),
        "L": ("L", float, None),
        "boundary": ("boundary", str, "periodic"),
    })
    config = _merge(args, table)
    _check_model(args.model)
    if args.lam is None:
        raise ValueError("--lambda is required")
    if args.boundary not in ("periodic", "neumann"):
        raise ValueError("boundary must be periodic or neumann")
    if args.boundary == "neumann" or (args.L is not None and args.model == "delta"):
        if args.model != "delta" or args.L is None:
            raise ValueError("boundary conditions apply to the pointlike well in a box (--model delta --L ...)")
        energy = delta_periodic_energy(args.lam, args.L, boundary=args.boundary)
    else:
        model = ModelSpec(id=args.model, lam=args.lam, L=args.L)
        energy = exact_eigenvalue(model, n=args.n)
    payload = {"energy": out.format_float(energy), "model": args.model,
               "lambda": out.format_float(args.lam), "n": args.n}
    if args.L is not None:
        payload["L"] = out.format_float(args.L)
    return _emit(args, "exact", config, payload, {},
                 ["model", "lambda", "n", "L", "energy"],
                 [(args.model, args.lam, args.n, args.L, energy)])


def _cmd_branch(args) -> int:
    table = dict(COMMON_TABLE)
    table.update({"model": ("model", str, None)})
    config = _merge(args, table)
    _check_model(args.model)
    eps_c, lam_c = branch_point(ModelSpec(id=args.model))
    payload = {"eps_c": out.format_float(eps_c), "lambda_c": out.format_float(lam_c)}
    return _emit(args, "branch", config, payload, {},
                 ["model", "eps_c", "lambda_c"], [(args.model, eps_c, lam_c)])


def _cmd_sum(args) -> int:
    table = dict(COMMON_TABLE)
    table.update({
        "kind": ("kind", str, None),
        "degrees": ("degrees", str, None),
        "at": ("at", float, None),
        "series_file": ("series-file", str, None),
        "slope": ("slope", float, -1.0),
        "subleading": ("subleading", float, None),
    })
    config = _merge(args, table)
    if args.kind not in ("pade", "qpade", "tppade"):
        raise ValueError("kind must be pade, qpade, or tppade")
    if args.series_file is None:
        raise ValueError("--series-file is required")
    if args.degrees is None:
        raise ValueError("--degrees is required")
    degrees = tuple(int(part) for part in args.degrees.split(","))
    series = out.series_from_document(out.load_document(args.series_file))
    rows = []
    if args.kind == "pade":
        if len(degrees) != 2:
            raise ValueError("pade needs --degrees L,M")
        approx = pade(series, *degrees)
        payload = {
            "kind": "pade",
            "numerator": [out.encode_number(c) for c in approx.numerator],
            "denominator": [out.encode_number(c) for c in approx.denominator],
            "requested": list(approx.requested),
            "reduced": approx.reduced,
        }
        rows += [("numerator", i, c) for i, c in enumerate(approx.numerator)]
        rows += [("denominator", i, c) for i, c in enumerate(approx.denominator)]
    elif args.kind == "qpade":
        if len(degrees) != 3:
            raise ValueError("qpade needs --degrees p,q,r")
        approx = quadratic_pade(series, degrees)
        payload = {
            "kind": "qpade",
            "p": [out.encode_number(c) for c in approx.p],
            "q": [out.encode_number(c) for c in approx.q],
            "r": [out.encode_number(c) for c in approx.r],
            "degrees": list(degrees),
            "branch": approx.branch,
        }
        for name in ("p", "q", "r"):
            rows += [(name, i, c) for i, c in enumerate(getattr(approx, name))]
    else:
        if len(degrees) != 2:
            raise ValueError("tppade needs --degrees p_small,q_large")
        approx = two_point_pade(series, degrees[0], degrees[1],
                                slope=args.slope, subleading=args.subleading)
        payload = {
            "kind": "tppade",
            "numerator_u": [out.encode_number(c) for c in approx.numerator],
            "denominator_u": [out.encode_number(c) for c in approx.denominator],
            "p_small": approx.p_small,
            "q_large": approx.q_large,
            "slope": out.format_float(approx.slope),
            "degenerate_top": approx.degenerate_top,
            "effective_slope": out.format_float(approx.effective_slope),
        }
        if approx.subleading is not None:
            payload["subleading"] = out.format_float(approx.subleading)
        rows += [("numerator_u", i, c) for i, c in enumerate(approx.numerator)]
        rows += [("denominator_u", i, c) for i, c in enumerate(approx.denominator)]
    if args.at is not None:
        value = approx.evaluate(args.at)
        payload["at"] = out.format_float(args.at)
        payload["value"] = out.format_float(value)
        rows.append(("value", None, value))
    return _emit(args, "sum", config, payload, {"series_file": args.series_file},
                 ["part", "index", "value"], rows)


def _scan_methods(model_id: str, series, order: int, methods) -> dict:
    """Per-method evaluators; approximants are built once from the series."""
    evaluators = {}
    if "exact" in methods:
        evaluators["exact"] = lambda lam: exact_eigenvalue(ModelSpec(id=model_id, lam=lam))
    if "series" in methods:
        coeffs = [float(c) for c in series.coeffs]

        def eval_series(lam: float) -> float:
            total = 0.0
            for c in reversed(coeffs):
                total = total * lam + c
            return total

        evaluators["series"] = eval_series
    if "pade" in methods:
        approx = pade(series, order // 2, order - order // 2)
        evaluators["pade"] = approx.evaluate
    if "qpade" in methods:
        qp = quadratic_pade(series, (2, 2, 1))
        evaluators["qpade"] = qp.evaluate
    if "tppade" in methods:
        big = large_lambda(ModelSpec(id=model_id))
        if big.leading is None:
            raise ValueError("no large-strength anchor for this model")
        if big.subleading is not None:
            tp = two_point_pade(series, 3, 2, slope=-1.0, subleading=big.subleading)
        else:
            tp = two_point_pade(series, 4, 1, slope=-1.0)
        evaluators["tppade"] = tp.evaluate
    return evaluators


def _cmd_scan(args) -> int:
    table = dict(COMMON_TABLE)
    table.update({
        "model": ("model", str, None),
        "lambda_min": ("lambda-min", float, None),
        "lambda_max": ("lambda-max", float, None),
        "steps": ("steps", int, 9),
        "methods": ("methods", str, "exact,series"),
        "order": ("order", int, 6),
    })
    config = _merge(args, table)
    config["no-figure"] = bool(args.no_figure)
    _check_model(args.model)
    if args.lambda_min is None or args.lambda_max is None:
        raise ValueError("--lambda-min and --lambda-max are required")
    if not (0 < args.lambda_min < args.lambda_max):
        raise ValueError("need 0 < lambda-min < lambda-max")
    if args.steps < 2:
        raise ValueError("need at least 2 steps")
    methods = [m for m in args.methods.split(",") if m]
    known = ("exact", "series", "pade", "qpade", "tppade")
    for m in methods:
        if m not in known:
            raise ValueError(f"unknown method {m!r} (choose from {known})")
    series = implicit_energy_series(ModelSpec(id=args.model), args.order, exact=True).series
    evaluators = {}
    failures = {}
    for m in methods:
        try:
            evaluators.update(_scan_methods(args.model, series, args.order, [m]))
        except (ValueError, NumericalError) as exc:
            failures[m] = str(exc)
    grid = [args.lambda_min + i * (args.lambda_max - args.lambda_min) / (args.steps - 1)
            for i in range(args.steps)]
    columns = ["lambda"] + methods
    rows = []
    for lam in grid:
        row = [lam]
        for m in methods:
            if m not in evaluators:
                row.append(None)
                continue
            try:
                row.append(evaluators[m](lam))
            except (ValueError, NumericalError):
                row.append(None)
        rows.append(row)
    notes = {"series_order": args.order}
    if failures:
        notes["method_failures"] = failures
    payload = {
        "columns": columns,
        "rows": [[None if v is None else out.format_float(v) for v in row] for row in rows],
    }
    csv_text = out.dump_csv(columns, rows)
    if not args.output:
        if args.format == "json":
            sys.stdout.write(out.dump_json(out.result_document("scan", config, payload, notes)))
        else:
            sys.stdout.write(csv_text)
        return 0
    base = args.output
    for suffix in (".csv", ".json", ".png", ".gp"):
        if base.endswith(suffix):
            base = base[: -len(suffix)]
            break
    emitted = []
    if args.format == "json":
        out.write_text_atomic(base + ".json", out.dump_json(
            out.result_document("scan", config, payload, notes)))
        emitted.append(base + ".json")
    else:
        out.write_text_atomic(base + ".csv", csv_text)
        emitted.append(base + ".csv")
        csv_name = (base + ".csv").rsplit("/", 1)[-1]
        out.write_text_atomic(base + ".gp", out.gnuplot_script(csv_name, columns))
        emitted.append(base + ".gp")
    if not args.no_figure:
        out.write_bytes_atomic(base + ".png", out.render_scan_figure(columns, rows))
        emitted.append(base + ".png")
    sys.stdout.write("".join(f"{name}\n" for name in emitted))
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Perturbation series for bound states of attractive "
                    "short-range wells: compute, cross-validate, and resum.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="strength series from the quantization condition")
    p.add_argument("--model", choices=MODEL_IDS, default=None)
    p.add_argument("--method", choices=("implicit", "beta", "lseries"), default=None,
                   help="implicit (exact), beta (delta-regularized, square well), "
                        "lseries (pointlike well in a box)")
    p.add_argument("--order", type=int, default=None, help="series order (default 6)")
    p.add_argument("--beta", type=float, default=None, help="regulator strength (beta method)")
    p.add_argument("--L", type=Fraction, default=None, help="box length (lseries)")
    _add_common(p)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("tmethod", help="direct integral coefficients and derived series")
    p.add_argument("--model", choices=MODEL_IDS, default=None)
    p.add_argument("--order", type=int, default=None, help="highest integral order (default 4)")
    _add_common(p)
    p.set_defaults(func=_cmd_tmethod)

    p = sub.add_parser("lmethod", help="periodic-box perturbation theory")
    p.add_argument("--model", choices=MODEL_IDS, default=None)
    p.add_argument("--L", type=float, default=None, help="box length")
    p.add_argument("--nmax", type=int, default=None, help="basis truncation (default 100)")
    p.add_argument("--order", type=int, default=None, help="perturbation order (default 3)")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="also diagonalize at this strength")
    p.add_argument("--blowup-L", dest="blowup_L", default=None, metavar="L1,L2,...",
                   help="emit the box-size blow-up table at these lengths instead")
    _add_common(p)
    p.set_defaults(func=_cmd_lmethod)

    p = sub.add_parser("exact", help="bound-state energy from the quantization condition")
    p.add_argument("--model", choices=MODEL_IDS, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--n", type=int, default=None, help="state index (default 0)")
    p.add_argument("--L", type=float, default=None, help="box length (pointlike well)")
    p.add_argument("--boundary", choices=("periodic", "neumann"), default=None,
                   help="box boundary condition (pointlike well)")
    _add_common(p)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("branch", help="branch point (eps_c, lambda_c) of the energy curve")
    p.add_argument("--model", choices=MODEL_IDS, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_branch)

    p = sub.add_parser("sum", help="resummation of an emitted series document")
    p.add_argument("--kind", choices=("pade", "qpade", "tppade"), default=None)
    p.add_argument("--degrees", default=None,
                   help="pade: L,M; qpade: p,q,r; tppade: p_small,q_large")
    p.add_argument("--series-file", dest="series_file", default=None, metavar="FILE",
                   help="JSON document from the series or tmethod subcommand")
    p.add_argument("--at", type=float, default=None, help="evaluate at this strength")
    p.add_argument("--slope", type=float, default=None,
                   help="large-strength slope for tppade (default -1)")
    p.add_argument("--subleading", type=float, default=None,
                   help="sqrt-strength asymptotic coefficient for tppade q_large=2")
    _add_common(p)
    p.set_defaults(func=_cmd_sum)

    p = sub.add_parser("scan", help="compare methods across a strength grid "
                                    "(CSV + gnuplot script + PNG when --output is set)")
    p.add_argument("--model", choices=MODEL_IDS, default=None)
    p.add_argument("--lambda-min", dest="lambda_min", type=float, default=None)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, default=None)
    p.add_argument("--steps", type=int, default=None, help="grid points (default 9)")
    p.add_argument("--methods", default=None,
                   help="comma list from exact,series,pade,qpade,tppade (default exact,series)")
    p.add_argument("--order", type=int, default=None, help="series order behind the "
                                                           "approximants (default 6)")
    p.add_argument("--no-figure", dest="no_figure", action="store_true",
                   help="skip the PNG figure")
    _add_common(p)
    p.set_defaults(func=_cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"{PROG}: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
