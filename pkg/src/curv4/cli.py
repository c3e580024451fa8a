"""Command-line front end.

Inputs are either a JSON tensor file or a catalog selector::

    curv4 decompose tensor.json
    curv4 extremes catalog product_s2s2 1 1
    curv4 check catalog cp2 --scale S=4 --k 1 --lambda1 1.3334 --conditions 2
    curv4 invariants sphere4 1
    curv4 verify --suite lemma26 -n 100000
    curv4 einstein --alpha 1

Exit codes: 0 success or pass, 1 semantic failure, 2 invalid input.
"""
import argparse
import sys
import warnings

import numpy as np

from . import __version__
from .curvature import BIANCHI_TOL, bianchi_residual, decompose, weitzenbock_r2, weyl_blocks
from .einstein import positive_intersection_contradiction
from .errors import BianchiViolation, CurvatureError, NonConvergenceWarning
from .extremes import extremes_optimize, extremes_sample, kperp_extremes_closed_form
from .io import dumps, load_tensor, model_document, to_jsonable
from .models import KINDS, invariants, model_curvature, with_scalar, ModelSpace
from .normal_form import berger_normal_form, block_residual, verify_normal_form
from .pinching import MODES, SpectralContext, check_conditions
from .verify import SUITES, default_seed, format_summary, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
GAP_TOL = 1e-6
_POSITIONAL = {"sphere4": ("r",), "rp4": ("r",), "cp2": ("S",), "product_s2s2": ("r1", "r2")}


class InputError(Exception):
    pass


def _parse_scale(items):
    params = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--scale expects KEY=VALUE, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise InputError(f"--scale value for {key!r} is not a number") from None
    return params


def resolve_input(tokens, scale=None, tolerance=None):
    """Return (operator, metadata, ModelSpace or None) for a file or catalog selector."""
    if not tokens:
        raise InputError("missing input: a tensor file or 'catalog KIND [PARAMS]'")
    if tokens[0] == "catalog":
        tokens = tokens[1:]
        if not tokens:
            raise InputError("catalog needs a kind: " + ", ".join(KINDS))
    if tokens[0] in KINDS:
        kind, rest = tokens[0], tokens[1:]
        names = _POSITIONAL[kind]
        if len(rest) > len(names):
            raise InputError(f"{kind} takes at most {len(names)} parameters {names}")
        try:
            params = {name: float(v) for name, v in zip(names, rest)}
        except ValueError:
            raise InputError(f"catalog parameters must be numbers, got {rest}") from None
        extra = _parse_scale(scale)
        target_S = extra.pop("S", None) if kind != "cp2" else None
        params.update(extra)
        space = model_curvature(kind, **params)
        if target_S is not None:
            space = with_scalar(space, target_S)
        return space.curvature, model_document(space)["metadata"], space
    if len(tokens) != 1:
        raise InputError(f"expected one tensor file, got {tokens}")
    if scale:
        raise InputError("--scale applies to catalog inputs only")
    R, meta = load_tensor(tokens[0], tolerance)
    return R, meta, None


def _envelope(command, config, result, status):
    return {"command": command, "status": status, "config": config, "result": result}


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    else:
        out.append((prefix, value))


def _render(doc, fmt):
    if fmt == "json":
        return dumps(doc)
    rows = []
    _flatten("", to_jsonable(doc), rows)
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def _config(args, **extra):
    cfg = {"input": getattr(args, "input", None), "seed": args.seed,
           "tolerance": args.tolerance if args.tolerance is not None else BIANCHI_TOL}
    cfg.update(extra)
    return cfg


def cmd_decompose(args):
    R, meta, _ = resolve_input(args.input, args.scale, args.tolerance)
    d = decompose(R)
    blocks = weyl_blocks(R)
    norms = {"scalar": float(np.linalg.norm(d.scalar_part.matrix)),
             "ricci": float(np.linalg.norm(d.ricci_part.matrix)),
             "weyl": float(np.linalg.norm(d.weyl_part.matrix))}
    result = {
        "S": d.scalar, "ricci": d.ricci.matrix,
        "wplus": blocks.wplus, "wminus": blocks.wminus,
        "wplus_spectrum": blocks.plus_eigenvalues, "wminus_spectrum": blocks.minus_eigenvalues,
        "part_norms": norms,
        "residuals": {"bianchi": float(bianchi_residual(R.matrix)),
                      "reassembly": float(np.abs(d.reassemble().matrix - R.matrix).max())},
        "r2_min_eigenvalue": weitzenbock_r2(R).min_eigenvalue,
        "metadata": meta,
    }
    return _envelope("decompose", _config(args), result, "ok"), EXIT_OK


def cmd_extremes(args):
    R, meta, _ = resolve_input(args.input, args.scale, args.tolerance)
    seed = args.seed
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonConvergenceWarning)
        if args.method == "optimize":
            def run(q, t):
                return extremes_optimize(R, q, t, seed=seed)
        else:
            def run(q, t):
                return extremes_sample(R, q, args.samples, seed=seed, target=t)
        kmin, kmax = run("sectional", "min"), run("sectional", "max")
        pmin, pmax = run("biorthogonal", "min"), run("biorthogonal", "max")
    closed_min, closed_max = kperp_extremes_closed_form(R)
    gaps = {"kperp_min": abs(pmin.value - closed_min.value),
            "kperp_max": abs(pmax.value - closed_max.value)}
    result = {
        "kmin": kmin.value, "kmax": kmax.value,
        "kperp_min": pmin.value, "kperp_max": pmax.value,
        "closed_form": {"kperp_min": closed_min.value, "kperp_max": closed_max.value},
        "cross_check_gaps": gaps,
        "witnesses": {"kmin": kmin.witness_plane, "kmax": kmax.witness_plane,
                      "kperp_min": pmin.witness_plane, "kperp_max": pmax.witness_plane},
        "warnings": sorted({str(w.message) for w in caught}),
        "metadata": meta,
    }
    ok = max(gaps.values()) <= GAP_TOL
    cfg = _config(args, method=args.method, samples=args.samples, gap_tolerance=GAP_TOL)
    return _envelope("extremes", cfg, result, "ok" if ok else "gap"), EXIT_OK if ok else EXIT_FAIL


def _conditions(values):
    out = []
    for v in values or ("1", "2", "3", "4"):
        for part in str(v).split(","):
            if part.strip():
                try:
                    out.append(int(part))
                except ValueError:
                    raise InputError(f"condition ids are integers 1-4, got {part!r}") from None
    return tuple(out)


def cmd_check(args):
    R, meta, _ = resolve_input(args.input, args.scale, args.tolerance)
    lam = args.lambda1 if args.lambda1 is not None else meta.get("lambda1")
    if lam is None:
        raise InputError("--lambda1 is required when the input carries no lambda1 metadata")
    conditions = _conditions(args.conditions)
    if args.conditions is None and args.k is None:
        conditions = tuple(c for c in conditions if c != 2)
    ctx = SpectralContext(float(lam), args.k)
    report = check_conditions(R, ctx, mode=args.mode, conditions=conditions, seed=args.seed)
    result = {"scalar": report.scalar, "kmin": report.kmin, "kmax": report.kmax,
              "conditions": [{"condition": c.condition, "description": c.description,
                              "threshold": c.threshold, "measured": c.measured,
                              "direction": c.direction, "passed": c.passed,
                              "margin": c.margin, **c.detail} for c in report.conditions],
              "any_holds": report.any_holds}
    cfg = _config(args, lambda1=ctx.lambda1, k=ctx.k, mode=args.mode, conditions=conditions)
    status = "pass" if report.any_holds else "fail"
    return _envelope("check", cfg, result, status), EXIT_OK if report.any_holds else EXIT_FAIL


def cmd_invariants(args):
    R, meta, space = resolve_input(args.input, args.scale, args.tolerance)
    if space is None:
        volume = args.volume if args.volume is not None else meta.get("volume")
        if volume is None:
            raise InputError("a tensor file needs --volume or a metadata volume")
        space = ModelSpace(meta.get("kind", "file"), meta.get("params", {}), R, float(volume),
                           int(meta.get("quotient_factor", 1)))
    elif args.volume is not None:
        raise InputError("--volume applies to tensor files only")
    rep = invariants(space)
    result = dict(to_jsonable(rep))
    result["known_invariants"] = space.known_invariants
    result["volume"] = space.volume
    result["quotient_factor"] = space.quotient_factor
    return _envelope("invariants", _config(args), result, "ok"), EXIT_OK


def cmd_normal_form(args):
    R, meta, _ = resolve_input(args.input, args.scale, args.tolerance)
    nf = berger_normal_form(R)
    rep = verify_normal_form(R, nf, seed=args.seed, samples=args.samples,
                             raise_on_failure=False)
    result = {"a": nf.a, "b": nf.b, "frame": nf.frame, "block_residual": block_residual(R, nf),
              "checks": rep.checks, "extremes": {"min": rep.min_value, "max": rep.max_value}}
    return (_envelope("normal-form", _config(args, samples=args.samples), result,
                      "ok" if rep.ok else "fail"), EXIT_OK if rep.ok else EXIT_FAIL)


def cmd_einstein(args):
    rep = positive_intersection_contradiction(args.alpha, args.coefficient)
    cfg = {"alpha": args.alpha, "coefficient": args.coefficient}
    return _envelope("einstein", cfg, rep, "ok"), EXIT_OK


def cmd_verify(args):
    results, elapsed = run_suites(args.suite, seed=args.seed, n=args.n)
    print(f"elapsed {elapsed:.2f} s", file=sys.stderr)
    failed = [r for r in results if not r.ok]
    cfg = {"seed": args.seed, "suites": [r.name for r in results], "n": args.n}
    if args.format == "table":
        text = format_summary(results, args.seed)
        if failed:
            text += "\n" + dumps({"suite": failed[0].name, "counterexample": failed[0].counterexample})
        return text, EXIT_FAIL if failed else EXIT_OK
    result = {"suites": [{"name": r.name, "count": r.count, "falsifications": r.falsifications,
                          "max_residual": r.max_residual, "notes": r.notes} for r in results]}
    if failed:
        result["counterexample"] = {"suite": failed[0].name, **failed[0].counterexample}
    return (_envelope("verify", cfg, result, "fail" if failed else "ok"),
            EXIT_FAIL if failed else EXIT_OK)


def cmd_export(args):
    R, meta, space = resolve_input(args.input, args.scale, args.tolerance)
    doc = model_document(space) if space is not None else {
        "basis": "lex-eij", "matrix": R.matrix, "tolerance": args.tolerance or BIANCHI_TOL,
        "metadata": meta}
    return dumps(doc), EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $CURV4_SEED or a fixed constant)")
    # None resolves per command in main(); parent actions are shared, so no set_defaults
    common.add_argument("--format", choices=("json", "table"), default=None,
                        help="output format (default: json; table for verify)")
    common.add_argument("--tolerance", type=float, default=None,
                        help="Bianchi tolerance used when loading tensor files")

    parser = argparse.ArgumentParser(prog="curv4", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input", nargs="+", help="tensor JSON file or 'catalog KIND [PARAMS]'")
        p.add_argument("--scale", action="append", metavar="KEY=VALUE",
                       help="catalog parameter, e.g. S=12 or r1=2")
        return p

    p = with_input("decompose", "scalar, Ricci and Weyl parts")
    p.set_defaults(func=cmd_decompose)

    p = with_input("extremes", "sectional and biorthogonal curvature extremes")
    p.add_argument("--method", choices=("optimize", "sample"), default="optimize")
    p.add_argument("--samples", type=int, default=10 ** 5)
    p.set_defaults(func=cmd_extremes)

    p = with_input("check", "pinching conditions")
    p.add_argument("--lambda1", type=float, default=None)
    p.add_argument("--k", type=float, default=None, help="Ricci lower bound")
    p.add_argument("--conditions", nargs="+", default=None, help="ids among 1 2 3 4")
    p.add_argument("--mode", choices=MODES, default="biorthogonal")
    p.set_defaults(func=cmd_check)

    p = with_input("invariants", "Euler characteristic and signature from curvature")
    p.add_argument("--volume", type=float, default=None)
    p.set_defaults(func=cmd_invariants)

    p = with_input("normal-form", "normal form of the Weyl part")
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=cmd_normal_form)

    p = with_input("export", "write the tensor JSON document")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("einstein", parents=[common], help="positive intersection chain")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--coefficient", type=float, default=None,
                   help="override the Euler coefficient (boundary probing)")
    p.set_defaults(func=cmd_einstein)

    p = sub.add_parser("verify", parents=[common], help="run property suites")
    p.add_argument("--suite", nargs="+", default=None, choices=["all", *SUITES])
    p.add_argument("-n", type=int, default=None, help="instances per suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = default_seed()
    if args.format is None:
        args.format = "table" if args.command == "verify" else "json"
    try:
        out, code = args.func(args)
    except BianchiViolation as exc:
        print(f"error: {exc} (residual {exc.residual:.17g})", file=sys.stderr)
        return EXIT_INVALID
    except (CurvatureError, InputError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(out if isinstance(out, str) else _render(out, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
