"""Gorenstein-projective modules, stable Hom and the stable GP left recollement.

Three independent GP tests are provided:

* ``is_gp``: ``Ext^i(m, A) = 0`` for ``1 <= i <= d`` from a projective
  resolution of ``m``;
* ``is_gp_oracle``: total reflexivity, with both Ext conditions computed
  through the duality ``D`` from injective coresolutions;
* ``gp_tri_criterion``: for ``A = [[B, 0], [M, C]]``, ``(X, Y)_phi`` is GP
  iff ``phi`` is injective, ``Coker phi`` is GP over ``B`` and ``Y`` over ``C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactlin as el
from . import modcat as mc
from . import report
from .algebra import Algebra, Triangular
from .modcat import Module, TriModule


class NotGorenstein(RuntimeError):
    pass


class NotGP(ValueError):
    pass


def gorenstein_depth(a: Algebra, cap: int = 24) -> int:
    cache = a.__dict__.setdefault("_gor", {})
    if cap not in cache:
        cache[cap] = mc.gorenstein_check(a, cap)
    g = cache[cap]
    if g is None:
        raise NotGorenstein(f"{a.name} is not Gorenstein within resolution cap {cap}")
    return max(g)


def is_gp(m: Module, d: int | None = None) -> bool:
    a = m.algebra
    d = gorenstein_depth(a) if d is None else d
    if m.dim == 0 or d == 0:
        return True
    res = mc.min_proj_resolution(m, cap=d + 1)
    reg = mc.regular(a)
    return all(mc.ext_dim(m, reg, i, res=res) == 0 for i in range(1, d + 1))


# ---------------------------------------------------------------- oracle


def star_module(m: Module) -> tuple[Module, np.ndarray]:
    """``m* = Hom_A(m, A)`` as a right module over the opposite algebra.

    Also returns the homomorphisms ``F[k]`` (``dim m x dim A``) forming the
    basis of the returned module.
    """
    a = m.algebra
    op = a.opposite()
    f = mc.hom_space(m, mc.regular(a))
    k = f.shape[0]
    if k == 0:
        return mc.zero_module(op), f
    flat = f.reshape(k, -1)
    act = np.zeros((a.dim, k, k), dtype=np.int64)
    for b in range(a.dim):
        # (f . b)(x) = b f(x): left multiplication on the regular module
        img = (f @ a.mult[b]).reshape(k, -1) % el.prime()
        sol = el.solve_rows(flat, img)
        if sol is None:
            raise mc.ModuleError("Hom(m, A) is not closed under left multiplication")
        act[b] = sol
    out = Module(op, act)
    if hasattr(out, "rebased"):
        f = np.einsum("ij,jab->iab", out.rebased, f) % el.prime()
    return out, f


def is_reflexive(m: Module) -> bool:
    """The evaluation map ``m -> m**`` is bijective."""
    if m.dim == 0:
        return True
    ms, f = star_module(m)
    if f.shape[0] == 0:
        return False
    ev = f.transpose(1, 0, 2).reshape(m.dim, -1)
    return el.rank(ev) == m.dim and mc.hom_dim(ms, mc.regular(ms.algebra)) == m.dim


def _coresolution(a: Algebra) -> mc.Resolution:
    """Projective resolution over the opposite algebra of ``D(A_A)``."""
    cache = a.__dict__.setdefault("_dreg_res", {})
    if "res" not in cache:
        cache["res"] = mc.min_proj_resolution(mc.dual(mc.regular(a)), cap=48)
    return cache["res"]


def ext_into_regular_dual(m: Module, i: int) -> int:
    """``Ext^i_A(m, A)`` computed as ``Ext^i(D A, D m)`` over the opposite algebra."""
    res = _coresolution(m.algebra)
    if not res.finite:
        raise NotGorenstein(f"{m.algebra.name}: D(A) has infinite projective dimension")
    return mc.ext_dim(res.module, mc.dual(m), i, res=res)


def is_gp_oracle(m: Module) -> bool:
    a = m.algebra
    if m.dim == 0:
        return True
    if not is_reflexive(m):
        return False
    d = _coresolution(a).length
    if any(ext_into_regular_dual(m, i) for i in range(1, d + 1)):
        return False
    ms, _ = star_module(m)
    d_op = _coresolution(ms.algebra).length
    return all(ext_into_regular_dual(ms, i) == 0 for i in range(1, d_op + 1))


# ---------------------------------------------------------------- triangular criterion


def phi_cokernel(t: TriModule) -> Module:
    if t.phi.shape[0] == 0:
        return t.x
    return mc.quotient(t.x, el.row_space(t.phi))[0]


def gp_tri_criterion(t: TriModule, d: int | None = None) -> bool:
    """``phi`` injective, ``Coker phi`` GP over ``B`` and ``Y`` GP over ``C``.

    ``d`` overrides the Ext depth on both outer algebras; by default each
    uses its own Gorenstein dimension.
    """
    for alg in (t.tri.a, t.tri.b, t.tri.c):
        gorenstein_depth(alg)
    if el.rank(t.phi) != t.phi.shape[0]:
        return False
    return is_gp(phi_cokernel(t), d) and is_gp(t.y, d)


# ---------------------------------------------------------------- scans


@dataclass
class ScanEntry:
    module: Module
    origins: list = field(default_factory=list)
    gp: bool = False
    label: str = ""


def _dedupe_into(pool: list, m: Module, origin, seed: int) -> None:
    for e in pool:
        if mc.module_iso_test(e.module, m, seed=seed) == "iso":
            e.origins.append(origin)
            return
    pool.append(ScanEntry(m, [origin]))


def radical_power_rows(m: Module, k: int) -> np.ndarray:
    """Rows spanning ``m rad^k``."""
    rows = el.identity(m.dim)
    for _ in range(k):
        if rows.shape[0] == 0:
            break
        rr = mc.submodule(m, rows)[0].radical_rows
        rows = (rr @ rows) % el.prime() if rr.shape[0] else rr
    return rows


def scan_seeds(a: Algebra) -> list[tuple[tuple, Module]]:
    """Simples, the other radical-layer quotients ``e_i A / e_i rad^k`` and the
    indecomposable injectives."""
    out = []
    for j in range(a.nvert):
        p = mc.proj_module(a, j)
        k = 1
        while True:
            rows = radical_power_rows(p, k)
            if rows.shape[0] == 0:
                break
            out.append((("top", a.vertex_labels[j], k), mc.quotient(p, rows)[0]))
            k += 1
    for j in range(a.nvert):
        out.append((("injective", a.vertex_labels[j]), mc.dual(mc.proj_module(a.opposite(), j))))
    return out


def gp_scan(a: Algebra, depth: int = 6, seed: int = 0) -> list[ScanEntry]:
    """Zero, the indecomposable projectives and ``Ω^i`` of the scan seeds for
    ``0 <= i <= depth``.

    ``("top", j, 1)`` is the simple at ``j``.  Members are deduplicated up to
    isomorphism and labeled by ``is_gp``.
    """
    d = gorenstein_depth(a)
    pool: list[ScanEntry] = []
    _dedupe_into(pool, mc.zero_module(a), ("zero",), seed)
    for i, p in enumerate(mc.indec_projectives(a)):
        _dedupe_into(pool, p, ("projective", a.vertex_labels[i]), seed)
    for origin, m in scan_seeds(a):
        res = mc.min_proj_resolution(m, cap=depth)
        syz = res.syzygies[:depth + 1]
        syz += [mc.zero_module(a)] * (depth + 1 - len(syz))
        for i, s in enumerate(syz):
            _dedupe_into(pool, s, origin + (i,), seed)
    for n, e in enumerate(pool):
        e.gp = is_gp(e.module, d)
        e.label = f"{a.name}#{n}"
    return pool


def agreement_table(a: Algebra, pool: list[ScanEntry], tri: Triangular | None = None) -> list[dict]:
    """Verdicts of the three criteria on every scanned module."""
    rows = []
    for e in pool:
        row = {"label": e.label, "dim": e.module.dim, "dimvec": e.module.dimvec.tolist(),
               "is_gp": bool(e.gp), "oracle": bool(is_gp_oracle(e.module))}
        if tri is not None:
            row["triangular"] = bool(gp_tri_criterion(mc.tri_unpack(e.module, tri)))
        verdicts = [v for k, v in row.items() if k in ("is_gp", "oracle", "triangular")]
        row["agree"] = len(set(verdicts)) == 1
        rows.append(row)
    return rows


# ---------------------------------------------------------------- stable category


def stable_hom_dim(m: Module, n: Module) -> int:
    """``dim Hom(m, n)`` modulo maps factoring through a projective."""
    h = mc.hom_space(m, n)
    if h.shape[0] == 0:
        return 0
    terms, cover = mc.projective_cover(n)
    if not terms:
        return h.shape[0]
    g = mc.hom_space(m, mc.free_module(m.algebra, terms))
    if g.shape[0] == 0:
        return h.shape[0]
    through = (g @ cover) % el.prime()
    return h.shape[0] - el.rank(through.reshape(g.shape[0], -1))


def stably_zero(m: Module) -> bool:
    return stable_hom_dim(m, m) == 0


def cosyzygy_gp(m: Module, check: bool = True) -> Module:
    """Cokernel of ``m -> P`` dual to a minimal presentation of ``m*``."""
    a = m.algebra
    if check and not is_gp(m):
        raise NotGP("cosyzygy_gp needs a Gorenstein-projective module")
    if m.dim == 0:
        return m
    ms, _ = star_module(m)
    res = mc.min_proj_resolution(ms, cap=1)
    if len(res.terms) < 2:
        return mc.zero_module(a)
    p0, p1, d = res.terms[0], res.terms[1], res.diffs[0]
    # P0* -> P1* over A; its image is the cosyzygy
    mat = mc.based_matrix(a, p0, p1, mc.star_based(ms.algebra, d))
    tgt = mc.free_module(a, p1)
    return mc.submodule(tgt, el.row_space(mat))[0]


def stable_form(m: Module) -> Module:
    """Representative without projective summands."""
    return mc.strip_projectives(m)


def stable_iso_test(m: Module, n: Module, seed: int = 0) -> str:
    return mc.module_iso_test(stable_form(m), stable_form(n), seed=seed)


def stable_serre(m: Module, check: bool = True) -> Module:
    """``Ω^d τ Ω^{-1}`` with ``d`` the Gorenstein dimension.

    For self-injective algebras this is the familiar ``τ Ω^{-1}``; the
    ``Ω^d`` brings ``τ`` of a GP module back into GP.
    """
    a = m.algebra
    d = gorenstein_depth(a)
    if check and not is_gp(m, d):
        raise NotGP("stable_serre needs a Gorenstein-projective module")
    out = mc.ar_translate(stable_form(cosyzygy_gp(m, check=False)))
    for _ in range(d):
        out = mc.syzygy(out)
    return stable_form(out)


# ---------------------------------------------------------------- stable recollement


def gp_i_upper(z: Module, tri: Triangular) -> Module:
    """``(X, Y)_phi -> Coker phi``."""
    return phi_cokernel(mc.tri_unpack(z, tri))


def gp_i_lower(x: Module, tri: Triangular) -> Module:
    """``X -> (X, 0)``."""
    y = mc.zero_module(tri.c)
    t = TriModule(tri, x, y, el.zeros(0, x.dim))
    return mc.tri_pack(t)


def gp_j_shriek(y: Module, tri: Triangular) -> Module:
    """``Y -> (Y ⊗_C M, Y)_Id``."""
    tm, pos, q = mc.tensor_data(y, tri.m)
    t = TriModule(tri, tm, y, el.identity(tm.dim))
    t.__dict__["tensor"] = (tm, pos, q)
    return mc.tri_pack(t)


def gp_j_upper(z: Module, tri: Triangular) -> Module:
    """``(X, Y)_phi -> Y``."""
    return mc.tri_unpack(z, tri).y


def _trivial(pool: list) -> bool:
    return all(stably_zero(m) for m in pool)


def stable_recollement(tri: Triangular, depth: int = 6, seed: int = 0, pools: dict | None = None,
                       compatible: bool = True) -> dict:
    """Stable-Hom checks of the left recollement ``(GP B, GP A, GP C)``.

    ``compatible`` records the standing assumption that ``M`` is compatible,
    which is not verified here.
    """
    for alg in (tri.a, tri.b, tri.c):
        gorenstein_depth(alg)
    if pools is None:
        pools = {k: [e.module for e in gp_scan(alg, depth, seed) if e.gp]
                 for k, alg in (("A", tri.a), ("B", tri.b), ("C", tri.c))}
    pa, pb, pc = pools["A"], pools["B"], pools["C"]
    entries = []

    def dims(axiom, check, lhs, rhs, **detail):
        st = "pass" if lhs == rhs else "fail"
        entries.append(report.entry(axiom, st, check, None, lhs=lhs, rhs=rhs, **detail))

    def iso(axiom, check, m, n, **detail):
        v = stable_iso_test(m, n, seed)
        st = {"iso": "pass", "noniso": "fail"}.get(v, "undetermined")
        w = None if st == "pass" else {"lhs": report.module_json(m), "rhs": report.module_json(n)}
        entries.append(report.entry(axiom, st, check, w, verdict=v, **detail))

    ix = [gp_i_lower(x, tri) for x in pb]
    jy = [gp_j_shriek(y, tri) for y in pc]
    iz = [gp_i_upper(z, tri) for z in pa]
    jz = [gp_j_upper(z, tri) for z in pa]
    for s, z in enumerate(pa):
        for t, x in enumerate(pb):
            dims("adjunction", "(i^*, i_*)", stable_hom_dim(iz[s], x), stable_hom_dim(z, ix[t]), pair=[s, t])
        for t, y in enumerate(pc):
            dims("adjunction", "(j_!, j^*)", stable_hom_dim(jy[t], z), stable_hom_dim(y, jz[s]), pair=[t, s])
    for s, x in enumerate(pb):
        for t, x2 in enumerate(pb):
            dims("fully faithful", "i_*", stable_hom_dim(ix[s], ix[t]), stable_hom_dim(x, x2), pair=[s, t])
    for s, y in enumerate(pc):
        for t, y2 in enumerate(pc):
            dims("fully faithful", "j_!", stable_hom_dim(jy[s], jy[t]), stable_hom_dim(y, y2), pair=[s, t])
    for t, x in enumerate(pb):
        dims("Im/Ker", "j^* i_* = 0", stable_hom_dim(gp_j_upper(ix[t], tri), gp_j_upper(ix[t], tri)), 0, index=t)
    for s, z in enumerate(pa):
        if stably_zero(jz[s]):
            iso("Im/Ker", "Ker j^* lies in Im i_*", z, gp_i_lower(iz[s], tri), index=s)
    for t, x in enumerate(pb):
        iso("period 1", "S_A i_* = i_* S_B", stable_serre(ix[t]), gp_i_lower(stable_serre(x), tri), index=t)
    entries = report.sort_entries(entries)
    out = {"mode": "stable", "seed": seed, "depth": depth, "assumes_compatible_M": compatible,
           "pool_sizes": {k: len(v) for k, v in sorted(pools.items())},
           "summary": report.summarize(entries), "entries": entries}
    if _trivial(pa) and _trivial(pb) and _trivial(pc):
        out["trivial_singularity_category"] = True
    return out


def stable_serre_duality(pool: list) -> list:
    """``stable_hom(x, y) = stable_hom(y, S x)`` over all pairs of the pool."""
    out = []
    images = [stable_serre(x) for x in pool]
    for s, x in enumerate(pool):
        for t, y in enumerate(pool):
            lhs, rhs = stable_hom_dim(x, y), stable_hom_dim(y, images[s])
            st = "pass" if lhs == rhs else "fail"
            out.append(report.entry("stable Serre duality", st, x.algebra.name, None, pair=[s, t], lhs=lhs, rhs=rhs))
    return out
