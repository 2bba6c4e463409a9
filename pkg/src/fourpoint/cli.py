"""Command-line surface: ingestion, certification dispatch, cone building,
boundary computation, and JSON report emission.

Exit codes: 0 all verdicts pass, 1 a verdict fails (a defect exceeds its
threshold or an equivalence check comes back negative), 2 input or usage
error.  Environment defaults FOURPOINT_KAPPA / _SEED / _WORKERS /
_THRESHOLD / _FORMAT apply when the flag is absent; an explicit flag always
wins.  Reports are deterministic for a fixed config and seed (timing
fields aside), independent of the worker count.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, _scan, comparison, cone as cone_mod, hyperbolicity, io as sio, moebius
from .spaces import generate, validate

SCHEMA_VERSION = 1
VERDICT_SLACK = 1e-9  # absolute slack so exact-equality defects keep passing
DEFAULT_THRESHOLDS = {"ptolemy": 0.0, "ptk": 0.0, "gromov": 0.0, "ascat": 0.0, "apt": 4.0}


def _env(name, cast, default):
    raw = os.environ.get(f"FOURPOINT_{name}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        return default


class UsageError(Exception):
    pass


def _add_input_args(p, second=False):
    p.add_argument("--in", dest="input", metavar="PATH_OR_SPEC", help="CSV/JSON file or generator spec")
    p.add_argument("--gen", dest="gen", metavar="SPEC", help="generator spec, e.g. euclidean:dim=2,n=20")
    if second:
        p.add_argument("--in2", dest="input2", metavar="PATH_OR_SPEC", required=True)


def _add_common_args(p):
    p.add_argument("--seed", type=int, default=_env("SEED", int, 0))
    p.add_argument("--workers", type=int, default=_env("WORKERS", int, 1))
    p.add_argument("--threshold", type=float, default=_env("THRESHOLD", float, None))
    p.add_argument("--kappa", type=float, default=_env("KAPPA", float, None))
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default=_env("FORMAT", str, "json"))


def build_parser():
    ap = argparse.ArgumentParser(prog="fourpoint", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check metric axioms and omega rules")
    _add_input_args(p)
    _add_common_args(p)

    p = sub.add_parser("certify", help="scan a four-point defect")
    p.add_argument("certifier", choices=("ptolemy", "ptk", "apt", "gromov", "ascat"))
    _add_input_args(p)
    _add_common_args(p)

    p = sub.add_parser("moebius", help="cross-ratio operations")
    msub = p.add_subparsers(dest="moebius_op", required=True)
    q = msub.add_parser("crt")
    _add_input_args(q)
    _add_common_args(q)
    q.add_argument("--quad", required=True, help="four comma-separated point indices")
    q = msub.add_parser("equivalent")
    _add_input_args(q, second=True)
    _add_common_args(q)
    q = msub.add_parser("involute")
    _add_input_args(q)
    _add_common_args(q)
    q.add_argument("--omega", type=int, required=True)
    q = msub.add_parser("homothety")
    _add_input_args(q, second=True)
    _add_common_args(q)

    p = sub.add_parser("cone", help="hyperbolic cone constructions")
    csub = p.add_subparsers(dest="cone_op", required=True)
    q = csub.add_parser("build")
    _add_input_args(q)
    _add_common_args(q)
    q.add_argument("--heights", default="geometric:9", help="'geometric:K' or comma-separated list")
    q.add_argument("--truncate", action="store_true")
    q.add_argument("--z0", type=int, default=0)
    q = csub.add_parser("boundary")
    _add_input_args(q)
    _add_common_args(q)
    q.add_argument("--z0", type=int, default=0)
    q.add_argument("--levels", type=int, default=9)
    q = csub.add_parser("busemann")
    _add_input_args(q)
    _add_common_args(q)
    q.add_argument("--cone", dest="cone_path", help="cone descriptor JSON from 'cone build'")
    q.add_argument("--base", type=int, default=0, help="base index of the probe point")
    q.add_argument("--height", type=float, default=1.0, help="height of the probe point")
    q.add_argument("--imax", type=int, default=2 ** 20)

    p = sub.add_parser("gen", help="generate a space and write it out")
    p.add_argument("spec", help="generator spec, e.g. hyperboloid:kappa=-1,n=15,radius=2")
    _add_common_args(p)

    return ap


def _load_input(args, attr="input"):
    src = getattr(args, attr, None)
    gen = getattr(args, "gen", None) if attr == "input" else None
    if src and gen:
        raise UsageError("give either --in or --gen, not both")
    src = src or gen
    if not src:
        raise UsageError("no input: use --in PATH or --gen SPEC")
    try:
        space = sio.load_space(src, seed=args.seed)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load {src!r}: {exc}") from None
    return space


def _require_valid(space):
    rep = validate(space)
    if not rep.ok:
        wit = [{"kind": k, "witness": list(w), "magnitude": m} for k, w, m in rep.violations[:20]]
        raise UsageError("input is not a valid (extended) metric space: " + json.dumps(wit))
    return space


def _report(args, command, payload, verdict=None):
    rep = {
        "schema_version": SCHEMA_VERSION,
        "tool": "fourpoint",
        "version": __version__,
        "backend": _scan.backend(),
        "command": command,
        "results": payload,
    }
    if verdict is not None:
        rep["verdict"] = verdict
    text = json.dumps(rep, indent=1, sort_keys=True, allow_nan=False, default=_jsonable)
    out = getattr(args, "out", None)
    if out and command not in ("gen", "cone build"):
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return rep


def _jsonable(v):
    import math

    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    raise TypeError(f"not JSON serializable: {type(v)}")


def _verdict(defect, threshold):
    return {"pass": bool(defect <= threshold + VERDICT_SLACK), "threshold": threshold, "slack": VERDICT_SLACK}


def _cmd_validate(args):
    space = _load_input(args)
    rep = validate(space)
    payload = {"input_digest": sio.space_digest(space), "n": space.n, "validation": rep.to_dict()}
    _report(args, "validate", payload)
    return 0 if rep.ok else 2


def _cmd_certify(args):
    space = _require_valid(_load_input(args))
    kappa = args.kappa
    name = args.certifier
    threshold = args.threshold if args.threshold is not None else DEFAULT_THRESHOLDS[name]
    if name == "ptolemy":
        cert = moebius.ptolemy_defect(space, workers=args.workers)
        defect = cert.defect
    elif name == "gromov":
        cert = hyperbolicity.gromov_delta(space, workers=args.workers)
        defect = cert.defect
    elif name == "ptk":
        if kappa is None:
            raise UsageError("certify ptk needs --kappa")
        cert = hyperbolicity.pt_kappa_defect(space, kappa, workers=args.workers)
        defect = cert.defect
    elif name == "apt":
        if kappa is None or kappa >= 0:
            raise UsageError("certify apt needs --kappa < 0")
        cert = hyperbolicity.apt_defect(space, kappa, workers=args.workers)
        defect = cert.exp_defect
    else:
        if kappa is None or kappa >= 0:
            raise UsageError("certify ascat needs --kappa < 0")
        cert = comparison.ascat_defect(space, kappa, workers=args.workers)
        defect = cert.defect
    payload = {
        "input_digest": sio.space_digest(space),
        "certifier": name,
        "config": {"kappa": kappa, "seed": args.seed, "threshold": threshold},
        "certificate": cert.to_dict(),
    }
    _report(args, "certify", payload, verdict=_verdict(defect, threshold))
    return 0 if defect <= threshold + VERDICT_SLACK else 1


def _cmd_moebius(args):
    space = _require_valid(_load_input(args))
    op = args.moebius_op
    if op == "crt":
        quad = tuple(int(t) for t in args.quad.split(","))
        triple = moebius.crt(space, quad)
        payload = {
            "input_digest": sio.space_digest(space),
            "quad": list(quad),
            "triple": list(triple.entries),
            "in_delta": moebius.in_delta(triple),
        }
        _report(args, "moebius crt", payload)
        return 0
    if op == "equivalent":
        other = _require_valid(_load_input(args, "input2"))
        ok, disc = moebius.moebius_equivalent(space, other)
        payload = {
            "input_digest": sio.space_digest(space),
            "other_digest": sio.space_digest(other),
            "equivalent": ok,
            "max_discrepancy": disc,
        }
        _report(args, "moebius equivalent", payload, verdict={"pass": ok})
        return 0 if ok else 1
    if op == "involute":
        res = moebius.involute(space, args.omega)
        if args.out:
            sio.save_space(res.space, args.out, fmt=args.format)
        payload = {"input_digest": sio.space_digest(space), "omega": args.omega, **res.to_dict()}
        _report(args, "moebius involute", payload, verdict={"pass": res.report.ok})
        return 0 if res.report.ok else 1
    other = _require_valid(_load_input(args, "input2"))
    res = moebius.homothety_ratio(space, other)
    payload = {
        "input_digest": sio.space_digest(space),
        "other_digest": sio.space_digest(other),
        "ok": res.ok,
        "ratio": res.ratio if res.ok else None,
        "worst_pair": list(res.worst_pair),
        "max_deviation": res.max_deviation,
    }
    _report(args, "moebius homothety", payload, verdict={"pass": res.ok})
    return 0 if res.ok else 1


def _parse_heights(spec, diam):
    if spec.startswith("geometric:"):
        return cone_mod.geometric_heights(diam, int(spec.split(":", 1)[1]))
    return [float(t) for t in spec.split(",")]


def _cmd_cone(args):
    op = args.cone_op
    if op == "busemann" and args.cone_path:
        with open(args.cone_path) as fh:
            built = cone_mod.cone_from_descriptor(json.load(fh))
        space = built.base_space
    else:
        space = _require_valid(_load_input(args))
        built = None
    if op == "build":
        heights = _parse_heights(args.heights, space.diam)
        built = cone_mod.build_cone(space, heights, truncate=args.truncate, z0=args.z0)
        rep = validate(built.as_space()) if built.n <= cone_mod.MAX_MATERIALIZED_POINTS else None
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(built.to_descriptor(), fh, indent=1)
                fh.write("\n")
        payload = {
            "input_digest": sio.space_digest(space),
            "points": built.n,
            "heights": sorted({p.height for p in built.points}, reverse=True),
            "validation": rep.to_dict() if rep else None,
        }
        ok = rep.ok if rep else True
        _report(args, "cone build", payload, verdict={"pass": ok})
        return 0 if ok else 1
    if op == "boundary":
        bm = cone_mod.boundary_metric(space, z0=args.z0, levels=args.levels)
        if args.out:
            sio.save_space(bm.space, args.out, fmt=args.format)
        recovered = cone_mod.recovered_involution(space, z0=args.z0)
        recov_err = float(np.max(np.abs(recovered - space.dist)))
        payload = {
            "input_digest": sio.space_digest(space),
            "z0": args.z0,
            "gaps": list(bm.gaps),
            "rate_constant": bm.rate_constant,
            "recovery_error": recov_err,
            "boundary_validation": validate(bm.space).to_dict(),
        }
        ok = validate(bm.space).ok and recov_err <= 1e-12
        _report(args, "cone boundary", payload, verdict={"pass": ok})
        return 0 if ok else 1
    # busemann
    if built is None:
        built = cone_mod.build_cone(space)
    x = cone_mod.ConePoint(args.base, args.height)
    res = cone_mod.busemann_approx(x, built, i_max=args.imax)
    payload = {
        "input_digest": sio.space_digest(built.base_space),
        "x": [args.base, args.height],
        "i_max": res.i_max,
        "value": res.value,
        "formula_value": res.formula_value,
        "checkpoints": [[i, r] for i, r in res.checkpoints],
    }
    _report(args, "cone busemann", payload)
    return 0


def _cmd_gen(args):
    try:
        kind, params = sio.parse_generator_spec(args.spec)
        space = generate(kind, params, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        sio.save_space(space, args.out, fmt=args.format)
    payload = {
        "spec": args.spec,
        "seed": args.seed,
        "n": space.n,
        "digest": sio.space_digest(space),
        "out": args.out,
    }
    _report(args, "gen", payload)
    return 0


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    dispatch = {
        "validate": _cmd_validate,
        "certify": _cmd_certify,
        "moebius": _cmd_moebius,
        "cone": _cmd_cone,
        "gen": _cmd_gen,
    }
    try:
        return dispatch[args.command](args)
    except UsageError as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": str(exc)}), file=sys.stderr)
        return 2
    except (ValueError, IndexError, FileNotFoundError) as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
