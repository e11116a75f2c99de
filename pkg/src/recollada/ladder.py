"""Serre functors, Serre-conjugate ladder rows and the checks built on them.

Rows follow the labeling where ``i_n`` goes from an outer algebra into
``A`` and ``j_n`` from ``A`` to an outer algebra:

    j_{-1} = i^*,  i_{-1} = j_!,  i_0 = i_*,  j_0 = j^*,  i_1 = j_*,  j_1 = i^!

Consecutive rows are adjoint: ``(i_n, j_{n+1})`` and ``(j_n, i_{n+1})``.
Rows outside ``{-1, 0, 1}`` are Serre conjugates of the base rows:
``i_{2n} = S_A^n i_0 S_B^{-n}``, ``i_{2n-1} = S_A^n i_{-1} S_C^{-n}``,
``j_{2n-1} = S_B^n j_{-1} S_A^{-n}``, ``j_{2n} = S_C^n j_0 S_A^{-n}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import homotopy as ht
from . import modcat as mc
from . import report
from .algebra import Algebra
from .recollement import (Evaluator, FunctorSpec, RecollementSpec, _iso_status, adjunction_entries,
                          compose, default_pools, identity_functor, sample_pairs)


class NotGorenstein(RuntimeError):
    pass


def _require_gorenstein(a: Algebra, cap: int = 24) -> tuple[int, int]:
    cache = a.__dict__.setdefault("_gor", {})
    if cap not in cache:
        cache[cap] = mc.gorenstein_check(a, cap)
    g = cache[cap]
    if g is None:
        raise NotGorenstein(f"{a.name} is not Gorenstein within resolution cap {cap}")
    return g


def _cached_spec(a: Algebra, kind: str, name: str) -> FunctorSpec:
    cache = a.__dict__.setdefault("_serre_specs", {})
    if kind not in cache:
        cache[kind] = FunctorSpec(kind, a, a, name=name)
    return cache[kind]


def serre(a: Algebra, check: bool = False) -> FunctorSpec:
    if check:
        _require_gorenstein(a)
    return _cached_spec(a, "serre", f"S[{a.name}]")


def inverse_serre(a: Algebra, check: bool = False) -> FunctorSpec:
    if check:
        _require_gorenstein(a)
    return _cached_spec(a, "inverse-serre", f"S^-1[{a.name}]")


def serre_power(a: Algebra, n: int) -> FunctorSpec:
    if n == 0:
        return identity_functor(a)
    f = serre(a) if n > 0 else inverse_serre(a)
    return compose(*([f] * abs(n)))


@dataclass
class LadderRow:
    index: int
    kind: str  # "i" (outer -> A) or "j" (A -> outer)
    functor: FunctorSpec


def _base(r: RecollementSpec, kind: str, n: int) -> FunctorSpec:
    table = {("j", -1): r.i_upper, ("i", -1): r.j_shriek, ("i", 0): r.i_lower,
             ("j", 0): r.j_upper, ("i", 1): r.j_lower, ("j", 1): r.i_shriek}
    return table[(kind, n)]


def conjugate_row(r: RecollementSpec, kind: str, n: int) -> FunctorSpec:
    """The Serre-conjugation formula for row ``n``, valid for every ``n``."""
    a, b, c = r.middle, r.outer, r.outer2
    if kind == "i":
        if n % 2 == 0:
            k, base, outer = n // 2, r.i_lower, b
        else:
            k, base, outer = (n + 1) // 2, r.j_shriek, c
        return compose(serre_power(outer, -k), base, serre_power(a, k), name=f"i_{n}")
    if n % 2 == 0:
        k, base, outer = n // 2, r.j_upper, c
    else:
        k, base, outer = (n + 1) // 2, r.i_upper, b
    return compose(serre_power(a, -k), base, serre_power(outer, k), name=f"j_{n}")


def ladder_row(r: RecollementSpec, n: int, kind: str = "i", check: bool = True) -> LadderRow:
    if check:
        for alg in (r.middle, r.outer, r.outer2):
            _require_gorenstein(alg)
    if n in (-1, 0, 1):
        return LadderRow(n, kind, _base(r, kind, n))
    return LadderRow(n, kind, conjugate_row(r, kind, n))


def _row_algebra(r: RecollementSpec, kind: str, n: int) -> Algebra:
    """Outer algebra of row ``n``."""
    if kind == "i":
        return r.outer if n % 2 == 0 else r.outer2
    return r.outer2 if n % 2 == 0 else r.outer


def verify_ladder_window(r: RecollementSpec, window: int = 2, pools: dict | None = None, seed: int = 3,
                         pool_size: int = 8, pair_count: int = 24, cap: int = 48) -> dict:
    if window < 1:
        raise ValueError("window must be at least 1")
    entries = []
    for alg in (r.middle, r.outer, r.outer2):
        try:
            _require_gorenstein(alg)
        except NotGorenstein as exc:
            entries.append(report.entry("hypothesis", "fail", "Gorenstein", None, reason=str(exc)))
    pools = pools or default_pools(r, seed, pool_size)
    pool_of = {id(r.middle): pools["A"], id(r.outer): pools["B"], id(r.outer2): pools["C"]}
    rng = np.random.default_rng(seed)
    ev = Evaluator(cap)
    rows = {(k, n): ladder_row(r, n, k, check=False).functor
            for n in range(-window, window + 1) for k in ("i", "j")}
    violation = None
    try:
        for n in range(-window, window):
            # (i_n, j_{n+1}) and (j_n, i_{n+1})
            for left, right in [(rows[("i", n)], rows[("j", n + 1)]), (rows[("j", n)], rows[("i", n + 1)])]:
                lp, rp = pool_of[id(left.source)], pool_of[id(right.source)]
                pairs = sample_pairs(rng, len(lp), len(rp), pair_count)
                entries += adjunction_entries(f"adjoint rows {n},{n + 1}", left, right, lp, rp, pairs, ev)
        for n in range(-window, window + 1):
            i_n, j_n = rows[("i", n)], rows[("j", n)]
            pool = pool_of[id(i_n.source)]
            for t, x in enumerate(pool):
                h = ht.homology_dims(ev(j_n, ev(i_n, x)))
                st = "pass" if not h else "fail"
                entries.append(report.entry("Im/Ker", st, f"j_{n} i_{n} = 0",
                                            None if st == "pass" else {"X": report.complex_json(x)}, index=t))
    except ht.ReplacementCapExceeded as exc:
        violation = str(exc)
        entries.append(report.entry("hypothesis", "fail", "replacement stays in K^b(proj)", None, reason=violation))
    entries = report.sort_entries(entries)
    violated = violation is not None or any(e["axiom"] == "hypothesis" for e in entries)
    return {"mode": "ladder", "seed": seed, "window": window, "hypothesis_violation": violated,
            "pool_sizes": {k: len(v) for k, v in pools.items()},
            "summary": report.summarize(entries), "entries": entries}


def verify_serre_duality(a: Algebra, pool: list, seed: int = 0, pair_count: int = 24, cap: int = 48) -> list:
    """``dim Hom(X, Y) = dim Hom(Y, S X)`` on sampled pairs."""
    rng = np.random.default_rng(seed)
    s = serre(a)
    ev = Evaluator(cap)
    out = []
    for i, j in sample_pairs(rng, len(pool), len(pool), pair_count):
        x, y = pool[i], pool[j]
        lhs = ht.hom_dim(x, y)
        rhs = ht.hom_dim(y, ev(s, x))
        st = "pass" if lhs == rhs else "fail"
        out.append(report.entry("Serre duality", st, a.name, None if st == "pass" else
                                {"X": report.complex_json(x), "Y": report.complex_json(y)},
                                pair=[i, j], lhs=lhs, rhs=rhs))
    return out


def serre_inverse_entries(a: Algebra, pool: list, seed: int = 0, cap: int = 48) -> list:
    ev = Evaluator(cap)
    s, si = serre(a), inverse_serre(a)
    out = []
    for i, x in enumerate(pool):
        for name, f in [("S S^-1", compose(si, s)), ("S^-1 S", compose(s, si))]:
            v = ht.iso_test(ev(f, x), x, seed=seed)
            out.append(report.entry("Serre inverse", _iso_status(v), f"{name} = id", None, index=i, verdict=v))
    return out


def check_period_one(r: RecollementSpec, pools: dict | None = None, seed: int = 0, pool_size: int = 8,
                     cap: int = 48) -> dict:
    """Commutation of ``S_A`` with ``i_*`` and ``j_!`` (against ``S_B``, ``S_C``)."""
    pools = pools or default_pools(r, seed, pool_size)
    ev = Evaluator(cap)
    entries = []
    for f, outer, pool in [(r.i_lower, r.outer, pools["B"]), (r.j_shriek, r.outer2, pools["C"])]:
        sa, so = serre(r.middle), serre(outer)
        for i, x in enumerate(pool):
            v = ht.iso_test(ev(sa, ev(f, x)), ev(f, ev(so, x)), seed=seed)
            entries.append(report.entry("period 1", _iso_status(v), f"S_A {f.name} = {f.name} S",
                                        None if v == "iso" else {"X": report.complex_json(x)}, index=i, verdict=v))
    # the Serre-conjugate descriptions of i^! and j_* from the left adjoints
    for name, conj, base, pool in [("S_B i^* S_A^-1 = i^!", conjugate_row(r, "j", 1), r.i_shriek, pools["A"]),
                                   ("S_A j_! S_C^-1 = j_*", conjugate_row(r, "i", 1), r.j_lower, pools["C"])]:
        for i, x in enumerate(pool):
            v = ht.iso_test(ev(conj, x), ev(base, x), seed=seed)
            entries.append(report.entry("conjugation", _iso_status(v), name,
                                        None if v == "iso" else {"X": report.complex_json(x)}, index=i, verdict=v))
    entries = report.sort_entries(entries)
    strict = all(e["status"] == "pass" for e in entries if e["axiom"] == "period 1")
    image = all(e["status"] == "pass" for e in entries if e["axiom"] == "conjugation")
    # image form: S_A^{-1} carries Im j_* onto Im j_!, which is what period 1 asks for
    return {"mode": "period", "seed": seed, "strict_commutation": strict, "image_form": image,
            "summary": report.summarize(entries), "entries": entries}


def check_splitting(r: RecollementSpec, pools: dict | None = None, seed: int = 0, pool_size: int = 8,
                    cap: int = 48) -> dict:
    pools = pools or default_pools(r, seed, pool_size)
    ev = Evaluator(cap)
    entries = []
    witness = None
    for i, x in enumerate(pools["A"]):
        v = ht.iso_test(ev(r.i_shriek, x), ev(r.i_upper, x), seed=seed)
        entries.append(report.entry("splitting", "pass", "i^! X vs i^* X", None, index=i, verdict=v))
        if v == "noniso" and witness is None:
            witness = {"X": report.complex_json(x), "i^!X": report.complex_json(ev(r.i_shriek, x)),
                       "i^*X": report.complex_json(ev(r.i_upper, x))}
    verdicts = [e["detail"]["verdict"] for e in entries]
    if witness is not None:
        verdict = "not splitting"
    elif all(v == "iso" for v in verdicts):
        verdict = "consistent with splitting"
        ii = compose(r.i_shriek, r.i_lower)
        jj = compose(r.j_upper, r.j_shriek)
        for i, x in enumerate(pools["A"]):
            v = ht.iso_test(x, ht.direct_sum([ev(ii, x), ev(jj, x)]), seed=seed)
            entries.append(report.entry("direct sum", _iso_status(v), "X = i_*i^!X ⊕ j_!j^*X", None,
                                        index=i, verdict=v))
    else:
        verdict = "undetermined"
    entries = report.sort_entries(entries)
    out = {"mode": "splitting", "seed": seed, "verdict": verdict,
           "summary": report.summarize(entries), "entries": entries}
    if witness is not None:
        out["witness"] = witness
    return out


def check_calabi_yau(a: Algebra, d_max: int = 4, pool: list | None = None, seed: int = 0,
                     cap: int = 48) -> int | None:
    pool = pool if pool is not None else ht.sample_pool(a, seed, 6)
    ev = Evaluator(cap)
    s = serre(a)
    images = [ev(s, x) for x in pool]
    for d in range(0, d_max + 1):
        if all(ht.iso_test(sx, ht.shift(x, d), seed=seed) == "iso" for x, sx in zip(pool, images)):
            return d
    return None
