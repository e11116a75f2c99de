"""Command-line front end.

    recollada build SPEC
    recollada verify SPEC --mode recollement|ladder|stable|splitting|cy|period
    recollada gp SPEC --depth D

Reports are JSON with sorted keys.  Exit codes: 0 clean, 1 failed checks,
2 input error, 3 hypothesis violation (non-Gorenstein), 4 cross-check
disagreement.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from . import exactlin as el
from . import gproj as gp
from . import homotopy as ht
from . import ladder as ld
from . import modcat as mc
from . import recollement as rc
from . import report
from .algebra import DimensionCapExceeded
from .specfile import LoadedSpec, SpecError, load_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_DISAGREE = 0, 1, 2, 3, 4

DEFAULTS = {"recollement": (7, 12), "ladder": (3, 8), "stable": (0, 0), "splitting": (0, 8),
            "cy": (0, 6), "period": (0, 8)}


class HypothesisViolation(RuntimeError):
    pass


def _header(spec: LoadedSpec, command: str, **flags) -> dict:
    return {"tool": "recollada", "version": __version__, "command": command, "spec": spec.name,
            "prime": el.prime(), **flags}


def _gorenstein(a) -> dict | None:
    g = mc.gorenstein_check(a)
    return None if g is None else {"right": g[0], "left": g[1]}


def _global_dimension(a, cap: int = 24) -> dict:
    worst, witness = 0, None
    for i in range(a.nvert):
        d = mc.proj_dim(mc.simple(a, i), cap)
        if d is None:
            return {"finite": False, "witness": f"simple {a.vertex_labels[i]}",
                    "note": f"minimal resolution does not terminate within {cap} steps"}
        if d >= worst:
            worst, witness = d, f"simple {a.vertex_labels[i]}"
    return {"finite": True, "value": worst, "witness": witness}


def build_report(spec: LoadedSpec) -> dict:
    a = spec.algebra
    out = _header(spec, "build")
    out.update({"dim": a.dim, "idempotents": len(a.idem), "vertices": list(a.vertex_labels),
                "cartan": a.cartan.tolist(), "gorenstein": _gorenstein(a),
                "global_dimension": _global_dimension(a)})
    t = spec.tri
    if t is not None:
        out["triangular"] = {
            "B": {"dim": t.b.dim, "gorenstein": _gorenstein(t.b)},
            "C": {"dim": t.c.dim, "gorenstein": _gorenstein(t.c)},
            "M": {"dim": t.m.dim, "proj_dim_over_B": mc.proj_dim(t.m.as_right()),
                  "proj_dim_over_C": mc.proj_dim(t.m.as_left())},
            "e": [a.vertex_labels[v] for v in t.c_verts],
            "stratifying": bool(t.stratifying_witness()),
        }
    return out


def _recollement(spec: LoadedSpec) -> rc.RecollementSpec:
    if spec.tri is None:
        raise SpecError(f"{spec.name}: this mode needs a triangular spec (key 'e' or 'triangular')")
    try:
        return rc.six_functors(spec.tri)
    except rc.NotStratifying as exc:
        raise SpecError(f"{spec.name}: {exc}") from None


def _require_gorenstein(*algs) -> None:
    for alg in algs:
        if mc.gorenstein_check(alg) is None:
            raise HypothesisViolation(f"{alg.name} is not Gorenstein within resolution cap 24")


def verify_report(spec: LoadedSpec, mode: str, seed: int | None = None, samples: int | None = None,
                  window: int = 2, depth: int = 6) -> dict:
    dseed, dsize = DEFAULTS[mode]
    seed = dseed if seed is None else seed
    size = dsize if samples is None else samples
    head = _header(spec, "verify", mode=mode, seed=seed)
    a = spec.algebra
    if mode == "cy":
        _require_gorenstein(a)
        d = ld.check_calabi_yau(a, pool=ht.sample_pool(a, seed, size), seed=seed)
        return {**head, "samples": size, "calabi_yau_dimension": d}
    r = _recollement(spec)
    if mode == "recollement":
        body = rc.verify_recollement(r, seed=seed, pool_size=size)
    elif mode == "ladder":
        body = ld.verify_ladder_window(r, window, seed=seed, pool_size=size)
        head["window"] = window
    elif mode == "splitting":
        body = ld.check_splitting(r, seed=seed, pool_size=size)
    elif mode == "period":
        _require_gorenstein(r.middle, r.outer, r.outer2)
        body = ld.check_period_one(r, seed=seed, pool_size=size)
    elif mode == "stable":
        _require_gorenstein(r.middle, r.outer, r.outer2)
        body = gp.stable_recollement(spec.tri, depth=depth, seed=seed)
        head["depth"] = depth
    else:
        raise SpecError(f"unknown mode {mode}")
    if mode != "stable":
        head["samples"] = size
    return {**head, **body, "mode": mode}


def gp_report(spec: LoadedSpec, depth: int = 6, seed: int = 0) -> dict:
    a = spec.algebra
    _require_gorenstein(a)
    if spec.tri is not None:
        _require_gorenstein(spec.tri.b, spec.tri.c)
    pool = gp.gp_scan(a, depth, seed)
    table = gp.agreement_table(a, pool, spec.tri)
    out = _header(spec, "gp", depth=depth, seed=seed)
    out.update({"pool_size": len(pool), "gp_count": sum(row["is_gp"] for row in table),
                "table": table, "all_agree": all(row["agree"] for row in table)})
    bad = [e for e, row in zip(pool, table) if not row["agree"]]
    if bad:
        out["witness"] = {"label": bad[0].label, "module": report.module_json(bad[0].module)}
    return out


def _emit(obj: dict, json_out: str | None) -> None:
    text = report.dumps(obj)
    if json_out:
        with open(json_out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="recollada", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build", help="summarize an algebra spec")
    b.add_argument("spec")
    b.add_argument("--json", dest="json_out")
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("spec")
    v.add_argument("--mode", choices=sorted(DEFAULTS), default="recollement")
    v.add_argument("--window", type=int, default=2)
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--depth", type=int, default=6)
    v.add_argument("--json", dest="json_out")
    g = sub.add_parser("gp", help="scan Gorenstein-projective modules and cross-check criteria")
    g.add_argument("spec")
    g.add_argument("--depth", type=int, default=6)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--json", dest="json_out")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec = load_spec(args.spec)
        if args.command == "build":
            _emit(build_report(spec), args.json_out)
            return EXIT_OK
        if args.command == "verify":
            if args.window < 1:
                raise SpecError("--window must be at least 1")
            rep = verify_report(spec, args.mode, args.seed, args.samples, args.window, args.depth)
            _emit(rep, args.json_out)
            if rep.get("hypothesis_violation"):
                return EXIT_HYPOTHESIS
            return EXIT_FAIL if rep.get("summary", {}).get("fail", 0) else EXIT_OK
        rep = gp_report(spec, args.depth, args.seed)
        _emit(rep, args.json_out)
        return EXIT_OK if rep["all_agree"] else EXIT_DISAGREE
    except (SpecError, DimensionCapExceeded) as exc:
        print(f"recollada: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (HypothesisViolation, gp.NotGorenstein, ld.NotGorenstein) as exc:
        rep = {"hypothesis_violation": True, "reason": str(exc), "command": args.command}
        _emit(rep, getattr(args, "json_out", None))
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
