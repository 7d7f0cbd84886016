"""Command-line interface: ``maxrank <command> [options]``."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import replace

from . import __version__
from .binary import BinaryForm, BinaryFormError, complex_rank, parse_form, real_rank, sylvester_decompose
from .bounds import (
    bound_proposition,
    congruence_refined_bound,
    emit_waring_table,
    format_table,
    variety_bound_report,
    waring_bound_report,
)
from .decompose import FitFailure, FitOptions, two_point_split_complex, two_point_split_real
from .dimension import (
    DegenerateVarietyError,
    generic_rank_terracini,
    segre_generic_rank,
    waring_generic_rank,
)
from .io import (
    certificate_to_json,
    decomposition_to_json,
    dumps,
    point_from_json,
    split_report_to_json,
)
from .typical import sample_222_typical, sample_binary_typical, verify_r0_bound
from .variety import VarietyError, VarietySpec

log = logging.getLogger("maxrank")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_range(text: str) -> list[int]:
    """``"3..8"`` -> [3, ..., 8]; ``"3"`` -> [3]."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _ranges(values: list[str]) -> list[int]:
    out: list[int] = []
    for v in values:
        out.extend(_int_range(v))
    return out


def _formats(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _add_variety_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["veronese", "segre", "grassmannian", "power_of_forms"], default="veronese")
    p.add_argument("--n", type=int, help="number of variables (veronese, power_of_forms)")
    p.add_argument("-d", "--d", type=int, help="degree (veronese, power_of_forms)")
    p.add_argument("--k", type=int, help="power (power_of_forms) or subspace dimension (grassmannian)")
    p.add_argument("--m", type=int, help="ambient dimension (grassmannian)")
    p.add_argument("--format", type=_formats, help="comma-separated Segre formats, e.g. 3,3,3")


def _spec_from_args(args) -> VarietySpec:
    fam = args.family
    try:
        if fam == "veronese":
            _need(args, "n", "d")
            return VarietySpec.veronese(args.n, args.d)
        if fam == "segre":
            _need(args, "format")
            return VarietySpec.segre(args.format)
        if fam == "grassmannian":
            _need(args, "k", "m")
            return VarietySpec.grassmannian(args.k, args.m)
        _need(args, "n", "d", "k")
        return VarietySpec.power_of_forms(args.n, args.d, args.k)
    except VarietyError as exc:
        raise UsageError(str(exc)) from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"--family {args.family} needs " + ", ".join("--" + m for m in missing))


def _config(args) -> dict:
    skip = {"func", "out", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _header(args) -> dict:
    cfg = _config(args)
    digest = hashlib.sha256(json.dumps(cfg, sort_keys=True, default=str).encode()).hexdigest()[:16]
    return {"tool": "maxrank", "version": __version__, "seed": getattr(args, "seed", None),
            "config_hash": digest, "config": cfg}


def _emit(args, payload: dict, text: str | None = None) -> None:
    doc = {"header": _header(args), **payload}
    out = dumps(doc) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(out)
    if text is not None and getattr(args, "output_format", "json") == "text":
        hdr = doc["header"]
        sys.stdout.write(f"# maxrank {hdr['version']} seed={hdr['seed']} config={hdr['config_hash']}\n")
        sys.stdout.write(text + "\n")
    elif not getattr(args, "out", None):
        sys.stdout.write(out)


# --- commands -------------------------------------------------------------------


def cmd_table(args) -> int:
    if not args.waring:
        raise UsageError("only --waring tables are available")
    rows = emit_waring_table(args.n, _ranges(args.d))
    payload = {"rows": [r.as_dict() for r in rows]}
    refined = {f"{r.n},{r.d}": congruence_refined_bound(r.n, r.d) for r in rows}
    payload["congruence_refined"] = {k: v for k, v in refined.items() if v is not None}
    _emit(args, payload, format_table(rows))
    return EXIT_OK


def cmd_generic_rank(args) -> int:
    spec = _spec_from_args(args)
    if args.method == "closed-form":
        if spec.family == "veronese":
            res = waring_generic_rank(*spec.shape)
        elif spec.family == "segre":
            res = segre_generic_rank(spec.shape, args.trials, args.mode, args.seed)
        else:
            raise UsageError(f"no closed form for {spec.family}")
    else:
        res = generic_rank_terracini(spec, args.trials, args.mode, args.seed)
    payload = {
        "variety": {"family": spec.family, "params": spec.params},
        "ambient_affine_dim": spec.ambient_affine_dim,
        "r_gen": res.r_gen,
        "method": res.method,
        "exceptional": res.exceptional,
        "hypersurface_below": res.hypersurface_below,
        "observed_ranks": {str(k): v for k, v in res.observed.items()},
    }
    _emit(args, payload, f"r_gen = {res.r_gen}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    spec = _spec_from_args(args)
    if spec.family == "veronese":
        report = waring_bound_report(*spec.shape)
    else:
        res = generic_rank_terracini(spec, args.trials, args.mode, args.seed)
        report = variety_bound_report(spec, res.r_gen, res.hypersurface_below)
    payload = {"report": report.as_dict()}
    if args.proposition:
        k, c, s = args.proposition
        payload["proposition"] = {"k": k, "c": c, "s": s, "value": bound_proposition(k, c, s)}
    text = "\n".join(f"{e.label:>22}  {e.value}" for e in report.entries) + f"\n{'best':>22}  {report.best}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_rank_binary(args) -> int:
    try:
        if args.form is not None:
            F = parse_form(args.form)
        elif args.coeffs is not None:
            F = BinaryForm([x for x in args.coeffs.split(",")])
        else:
            raise UsageError("give --form or --coeffs")
    except (BinaryFormError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if F.is_zero():
        raise UsageError("the zero form has no rank")
    cert = real_rank(F, args.seed) if args.field == "real" else complex_rank(F, args.seed)
    payload = {"form": str(F), "d": F.d, "certificate": certificate_to_json(cert)}
    if args.decompose:
        payload["decomposition"] = decomposition_to_json(sylvester_decompose(cert, F))
    _emit(args, payload, f"{args.field} rank = {cert.rank}  (apolar form {cert.apolar_form})")
    return EXIT_OK


def _default_r_gen(spec: VarietySpec, seed: int) -> int:
    if spec.family == "veronese":
        return waring_generic_rank(*spec.shape).r_gen
    if spec.family == "segre":
        return segre_generic_rank(spec.shape, seed=seed).r_gen
    return generic_rank_terracini(spec, seed=seed).r_gen


def cmd_decompose(args) -> int:
    try:
        with open(args.input) as fh:
            point = point_from_json(json.load(fh))
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    spec = point.spec
    opts = FitOptions(seed=args.seed, restarts=args.restarts, max_iterations=args.max_iterations,
                      target_relative_residual=args.target)
    if args.mode == "real":
        if point.field != "real":
            raise UsageError("--mode real needs a real input point")
        r0 = args.r0 if args.r0 is not None else _default_r_gen(spec, args.seed)
        point = replace(point, coeffs=tuple(float(c) for c in point.coeffs))
        rep = two_point_split_real(spec, point, r0, opts)
    else:
        r_gen = args.r_gen if args.r_gen is not None else _default_r_gen(spec, args.seed)
        point = replace(point, field="complex", coeffs=tuple(complex(c) for c in point.coeffs))
        rep = two_point_split_complex(spec, point, r_gen, opts)
    payload = {"split": split_report_to_json(rep)}
    _emit(args, payload)
    return EXIT_OK


def cmd_typical(args) -> int:
    if args.family == "binary":
        if args.d is None:
            raise UsageError("--family binary needs -d")
        report = sample_binary_typical(args.d, args.samples, args.seed, args.threshold)
        spec = VarietySpec.veronese(2, args.d)
    else:
        report = sample_222_typical(args.samples, args.seed, args.threshold)
        spec = VarietySpec.segre([2, 2, 2])
    payload = {"report": report.as_dict()}
    if args.verify_r0:
        sampler = "negative_hyperdeterminant" if args.family == "segre222" else "gaussian"
        opts = FitOptions(seed=args.seed)
        check = verify_r0_bound(spec, report.r_gen_complex, args.verify_r0, args.seed, opts, sampler)
        payload["r0_bound"] = check.as_dict()
    text = f"histogram {report.histogram}  typical {report.observed_typical}  min {report.min_typical}"
    _emit(args, payload, text)
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxrank", description=__doc__)
    parser.add_argument("--version", action="version", version=f"maxrank {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--output-format", choices=["json", "text"], default="json")

    p = sub.add_parser("table", help="Waring rank bound tables")
    p.add_argument("--waring", action="store_true")
    p.add_argument("--n", type=int, nargs="+", default=[3, 4])
    p.add_argument("--d", nargs="+", default=["3..8"], help="degrees, e.g. 3..8 or 3 4 5")
    common(p)
    p.set_defaults(func=cmd_table, output_format="text")

    p = sub.add_parser("generic-rank", help="generic rank of a variety")
    _add_variety_args(p)
    p.add_argument("--method", choices=["terracini", "closed-form"], default="terracini")
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--trials", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_generic_rank)

    p = sub.add_parser("bounds", help="maximum-rank bounds")
    _add_variety_args(p)
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--proposition", type=int, nargs=3, metavar=("K", "C", "S"))
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("rank-binary", help="exact Waring rank of a binary form")
    p.add_argument("--form", help='e.g. "x^3*y - 2*y^4"')
    p.add_argument("--coeffs", help="comma-separated monomial coefficients, x^d first")
    p.add_argument("--field", choices=["real", "complex"], default="complex")
    p.add_argument("--decompose", action="store_true", help="include an explicit decomposition")
    common(p)
    p.set_defaults(func=cmd_rank_binary)

    p = sub.add_parser("decompose", help="two-point split decomposition of a point")
    p.add_argument("--input", required=True, help="AmbientPoint JSON")
    p.add_argument("--mode", choices=["complex", "real"], default="complex")
    p.add_argument("--r0", type=int, help="minimal typical rank (real mode)")
    p.add_argument("--r-gen", type=int, help="generic rank (complex mode)")
    p.add_argument("--restarts", type=int, default=FitOptions.restarts)
    p.add_argument("--max-iterations", type=int, default=FitOptions.max_iterations)
    p.add_argument("--target", type=float, default=FitOptions.target_relative_residual)
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("typical", help="sample real typical ranks")
    p.add_argument("--family", choices=["binary", "segre222"], default="binary")
    p.add_argument("-d", type=int)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--verify-r0", type=int, default=0, metavar="N",
                   help="also real-split N samples and check the 2*r0 bound")
    common(p)
    p.set_defaults(func=cmd_typical)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    argv_list = sys.argv[1:] if argv is None else list(argv)
    if getattr(args, "seed", None) is not None and "--seed" not in argv_list:
        sys.stderr.write(f"maxrank: no --seed given, using default seed {args.seed}\n")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"maxrank: error: {exc}\n")
        return EXIT_USAGE
    except (FitFailure, DegenerateVarietyError) as exc:
        sys.stderr.write(f"maxrank: computation failed: {exc}\n")
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())
