"""The six functors of a triangular pair ``(A, e)`` on bounded complexes of projectives.

Every functor is a tensor functor ``- ⊗ N`` with an explicit bimodule:

* ``i^* = - ⊗_A A/AeA``, ``i_* = - ⊗_B A/AeA``, ``i^! = - ⊗_A Hom_A(A/AeA, A)``
* ``j_! = - ⊗_C eA``, ``j^* = - ⊗_A Ae``, ``j_* = - ⊗_C Hom_C(Ae, C)``

The Hom forms are valid because ``A/AeA`` and ``Ae`` are projective on the
side where Hom is taken, which holds for every triangular algebra.
Evaluation tensors termwise, replaces by projectives and minimizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactlin as el
from . import homotopy as ht
from . import modcat as mc
from . import report
from .algebra import Algebra, Triangular, split_triangular


class NotStratifying(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FunctorSpec:
    kind: str  # tensor | hom | composite | serre | inverse-serre | identity
    source: Algebra
    target: Algebra
    bimodule: object = None
    parts: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.kind == "composite":
            for f, g in zip(self.parts, self.parts[1:]):
                if f.target is not g.source:
                    raise ValueError(f"composite {self.name}: {f.name} does not feed {g.name}")

    def then(self, other: "FunctorSpec", name: str = "") -> "FunctorSpec":
        return compose(self, other, name=name)


def compose(*fs: FunctorSpec, name: str = "") -> FunctorSpec:
    """Composite applying ``fs[0]`` first."""
    flat = []
    for f in fs:
        flat.extend(f.parts if f.kind == "composite" else [f])
    flat = [f for f in flat if f.kind != "identity"] or [fs[0]]
    if len(flat) == 1:
        return flat[0]
    return FunctorSpec("composite", flat[0].source, flat[-1].target, parts=tuple(flat),
                       name=name or " . ".join(f.name for f in reversed(flat)))


def tensor_functor(n: mc.Bimodule, name: str = "") -> FunctorSpec:
    return FunctorSpec("tensor", n.left_algebra, n.right_algebra, bimodule=n, name=name)


def hom_functor(p: mc.Bimodule, name: str = "") -> FunctorSpec:
    """``Hom_S(P_S, -)`` for ``P = _T P _S``: from ``S`` to ``T`` modules."""
    return FunctorSpec("hom", p.right_algebra, p.left_algebra, bimodule=p, name=name)


def identity_functor(a: Algebra) -> FunctorSpec:
    return FunctorSpec("identity", a, a, name="id")


@dataclass
class RecollementSpec:
    outer: Algebra  # B, the quotient side
    middle: Algebra  # A
    outer2: Algebra  # C = eAe
    tri: Triangular
    i_upper: FunctorSpec  # i^*
    i_lower: FunctorSpec  # i_*
    i_shriek: FunctorSpec  # i^!
    j_shriek: FunctorSpec  # j_!
    j_upper: FunctorSpec  # j^*
    j_lower: FunctorSpec  # j_*
    bimodules: dict = field(default_factory=dict)

    def functors(self) -> dict:
        return {"i^*": self.i_upper, "i_*": self.i_lower, "i^!": self.i_shriek,
                "j_!": self.j_shriek, "j^*": self.j_upper, "j_*": self.j_lower}


# --------------------------------------------------------------- bimodules


def _unit_rows(dim: int, idx) -> np.ndarray:
    out = el.zeros(len(idx), dim)
    out[np.arange(len(idx)), idx] = 1
    return out


def triangular_bimodules(t: Triangular) -> dict:
    a = t.a
    reg = mc.regular_bimodule(a)
    ideal = [b for b in range(a.dim) if a.corner[b][0] in t.e.vertices]
    quot_ab = mc.quotient_bimodule(reg, _unit_rows(a.dim, ideal), right_algebra=t.b, right_index=t.b_idx)
    quot_ba = mc.quotient_bimodule(reg, _unit_rows(a.dim, ideal), left_algebra=t.b, left_index=t.b_idx)
    ea_rows = [b for b in range(a.dim) if a.corner[b][0] in t.e.vertices]
    ae_rows = [b for b in range(a.dim) if a.corner[b][1] in t.e.vertices]
    ea = mc.restrict_bimodule(reg, _unit_rows(a.dim, ea_rows), left_algebra=t.c, left_index=t.c_idx)
    ae = mc.restrict_bimodule(reg, _unit_rows(a.dim, ae_rows), right_algebra=t.c, right_index=t.c_idx)
    return {"A/AeA_AB": quot_ab, "A/AeA_BA": quot_ba, "eA": ea, "Ae": ae, "A": reg}


def six_functors(a: Algebra | Triangular, e=None) -> RecollementSpec:
    if isinstance(a, Triangular):
        t = a
    else:
        verts = e.vertices if hasattr(e, "vertices") else e
        try:
            t = split_triangular(a, verts)
        except ValueError as exc:
            raise NotStratifying(str(exc)) from exc
    if not t.stratifying_witness():
        raise NotStratifying("AeA is not a projective right A-module")
    bm = triangular_bimodules(t)
    if not mc.as_projective_check(bm["A/AeA_BA"].as_right()) or not mc.as_projective_check(bm["Ae"].as_right()):
        raise NotStratifying("A/AeA or Ae is not one-sided projective")
    bm["Hom(A/AeA,A)"] = mc.hom_into_regular(bm["A/AeA_BA"])
    bm["Hom(Ae,C)"] = mc.hom_into_regular(bm["Ae"])
    return RecollementSpec(
        t.b, t.a, t.c, t,
        tensor_functor(bm["A/AeA_AB"], "i^*"),
        tensor_functor(bm["A/AeA_BA"], "i_*"),
        FunctorSpec("hom", t.a, t.b, bimodule=bm["A/AeA_BA"], name="i^!"),
        tensor_functor(bm["eA"], "j_!"),
        tensor_functor(bm["Ae"], "j^*"),
        FunctorSpec("hom", t.c, t.a, bimodule=bm["Ae"], name="j_*"),
        bm,
    )


# --------------------------------------------------------------- evaluation


def tensor_complex(x: ht.BasedComplex, n: mc.Bimodule) -> ht.ModComplex:
    """Termwise ``X ⊗_A N``: the term ``e_i A`` becomes ``e_i N``."""
    a = x.algebra
    if n.left_algebra is not a:
        raise ValueError("bimodule does not act on this complex")
    rows = [[j for j in range(n.dim) if n.lvertex[j] == i] for i in range(a.nvert)]
    d = n.right_algebra
    cache = {}

    def piece(i):
        if i not in cache:
            r = rows[i]
            cache[i] = mc.Module(d, n.right[:, r][:, :, r]) if r else mc.zero_module(d)
        return cache[i]

    mods, maps = {}, {}
    for k, t in x.terms.items():
        mods[k] = mc.direct_sum([piece(i) for i in t])
    p = el.prime()
    for k, dm in x.diffs.items():
        src, tgt = x.term(k), x.term(k + 1)
        out = el.zeros(mods[k].dim, mods[k + 1].dim)
        so = 0
        for s, i in enumerate(src):
            to = 0
            for r, j in enumerate(tgt):
                z = dm[r, s]
                if z.any() and rows[i] and rows[j]:
                    lz = np.einsum("b,bij->ij", z, n.left) % p
                    out[so:so + len(rows[i]), to:to + len(rows[j])] = lz[np.ix_(rows[i], rows[j])]
                to += len(rows[j])
            so += len(rows[i])
        maps[k] = out
    return ht.ModComplex(d, mods, maps)


def bimodule_chain_map(x: ht.BasedComplex, n: mc.Bimodule, n2: mc.Bimodule, g: np.ndarray) -> dict:
    """Termwise ``X ⊗ g : X ⊗ N -> X ⊗ N2`` for a bimodule map ``g`` (row convention)."""
    a = x.algebra
    r1 = [[j for j in range(n.dim) if n.lvertex[j] == i] for i in range(a.nvert)]
    r2 = [[j for j in range(n2.dim) if n2.lvertex[j] == i] for i in range(a.nvert)]
    out = {}
    for k, t in x.terms.items():
        blocks = [g[np.ix_(r1[i], r2[i])] if r1[i] and r2[i] else el.zeros(len(r1[i]), len(r2[i]))
                  for i in t]
        rows = sum(b.shape[0] for b in blocks)
        cols = sum(b.shape[1] for b in blocks)
        m = el.zeros(rows, cols)
        ro = co = 0
        for b in blocks:
            m[ro:ro + b.shape[0], co:co + b.shape[1]] = b
            ro += b.shape[0]
            co += b.shape[1]
        out[k] = m
    return out


def _effective_bimodule(f: FunctorSpec) -> mc.Bimodule:
    cache = f.__dict__.get("_eff")
    if cache is not None:
        return cache
    if f.kind == "tensor":
        n = f.bimodule
    elif f.kind == "hom":
        if not mc.as_projective_check(f.bimodule.as_right()):
            raise NotStratifying(f"{f.name}: Hom is only evaluated against one-sided projective bimodules")
        n = mc.hom_into_regular(f.bimodule)
    else:
        raise ValueError(f"{f.kind} functors have no single bimodule")
    object.__setattr__(f, "_eff", n)
    return n


def apply(f: FunctorSpec, x: ht.BasedComplex, cap: int = 48) -> ht.BasedComplex:
    if x.algebra is not f.source:
        raise ValueError(f"{f.name} expects a complex over {f.source.name}")
    if f.kind == "identity":
        return x
    if f.kind == "composite":
        for g in f.parts:
            x = apply(g, x, cap)
        return x
    if f.kind in ("tensor", "hom"):
        return ht.projective_replacement(tensor_complex(x, _effective_bimodule(f)), cap)
    if f.kind == "serre":
        return serre_complex(x, cap)
    if f.kind == "inverse-serre":
        return inverse_serre_complex(x, cap)
    raise ValueError(f"unknown functor kind {f.kind!r}")


def dual_bimodule(a: Algebra) -> mc.Bimodule:
    cache = a.__dict__.get("_da")
    if cache is None:
        cache = mc.regular_bimodule(a).dual()
        a._da = cache
    return cache


def serre_complex(x: ht.BasedComplex, cap: int = 48) -> ht.BasedComplex:
    """Derived Nakayama functor ``- ⊗_A DA``."""
    return ht.projective_replacement(tensor_complex(x, dual_bimodule(x.algebra)), cap)


def dual_complex(x: ht.BasedComplex) -> ht.ModComplex:
    """``D X`` as a complex over the opposite algebra (degrees negated)."""
    mods = x.to_modules()
    out_m = {-k: mc.dual(m) for k, m in mods.modules.items()}
    out_d = {-k - 1: mods.map(k).T.copy() for k in mods.maps}
    return ht.ModComplex(x.algebra.opposite(), out_m, out_d)


def star(x: ht.BasedComplex) -> ht.BasedComplex:
    """``Hom(X, A)`` over the opposite algebra: transpose the based matrices."""
    op = x.algebra.opposite()
    terms = {-k: t for k, t in x.terms.items()}
    diffs = {-k - 1: m.transpose(1, 0, 2).copy() for k, m in x.diffs.items()}
    return ht.BasedComplex(op, terms, diffs)


def inverse_serre_complex(x: ht.BasedComplex, cap: int = 48) -> ht.BasedComplex:
    """``RHom_A(DA, X) = Hom_{A^op}(D X, A)``."""
    q = ht.projective_replacement(dual_complex(x), cap)
    return ht.minimize(star(q))


# --------------------------------------------------------------- units and counits


def _element_image(n: mc.Bimodule, u: np.ndarray) -> np.ndarray:
    """Matrix of ``a -> a . u`` from ``A`` (regular basis) into ``N``."""
    return np.stack([u @ n.left[b] for b in range(n.left_algebra.dim)]) % el.prime()


def unit_data(r: RecollementSpec) -> dict:
    """Bimodule maps behind the units and counits, with their exactness witnesses."""
    cache = r.__dict__.get("_units")
    if cache is not None:
        return cache
    bm = r.bimodules
    a = r.middle
    p = el.prime()
    # j_! j^* = - ⊗ (Ae ⊗_C eA) with counit the multiplication
    jj, pos, _ = mc.tensor_bimodules(bm["Ae"], bm["eA"])
    ae_rows = [b for b in range(a.dim) if a.corner[b][1] in r.tri.e.vertices]
    ea_rows = [b for b in range(a.dim) if a.corner[b][0] in r.tri.e.vertices]
    mu = np.stack([a.mult[ae_rows[i], ea_rows[j]] for i, j in _kept_of(jj)]) if jj.dim else el.zeros(0, a.dim)
    # i_* i^* = - ⊗ (A/AeA ⊗_B A/AeA) with unit a -> a (1 ⊗ 1)
    ii, pos2, proj2 = mc.tensor_bimodules(bm["A/AeA_AB"], bm["A/AeA_BA"])
    u = el.zeros(1, ii.dim)[0]
    qa = bm["A/AeA_AB"]
    for v in r.tri.b_verts:
        # class of e_v in A/AeA, as a vector of quotient coordinates
        ev = _class_of(qa, a, a.idem[v])
        for i in np.nonzero(ev)[0]:
            for j in np.nonzero(ev)[0]:
                t = pos2[i, j]
                if t >= 0:
                    u = (u + ev[i] * ev[j] * proj2[t]) % p
    eta = _element_image(ii, u)
    # i_* i^! = - ⊗ (Hom_A(A/AeA, A) ⊗_B A/AeA) with counit the evaluation
    hq = bm["Hom(A/AeA,A)"]
    ih, pos3, _ = mc.tensor_bimodules(hq, bm["A/AeA_BA"])
    hom_basis = _hom_matrices(bm["A/AeA_BA"], a)
    omega = np.stack([hom_basis[i][j] for i, j in _kept_of(ih)]) % p if ih.dim else el.zeros(0, a.dim)
    # j_* j^* = - ⊗ (Ae ⊗_C Hom_C(Ae, C)) with unit a -> (left multiplication by a)
    hc = bm["Hom(Ae,C)"]
    jh, pos4, proj4 = mc.tensor_bimodules(bm["Ae"], hc)
    zeta = _zeta_map(r, jh, bm["Ae"], hc)
    cache = {"jj": jj, "mu": mu, "ii": ii, "eta": eta, "ih": ih, "omega": omega, "jh": jh, "zeta": zeta}
    r._units = cache
    return cache


def _kept_of(n: mc.Bimodule):
    return n.kept


def _class_of(q: mc.Bimodule, a: Algebra, basis_index: int) -> np.ndarray:
    """Coordinates in the quotient bimodule of the class of a basis element of ``A``."""
    return q.source_projection[basis_index]


def _hom_matrices(p: mc.Bimodule, r_alg: Algebra) -> list:
    fb = mc.hom_space(p.as_right(), mc.regular(p.right_algebra))
    flat = fb.reshape(fb.shape[0], -1)
    rr, piv, rk = el.rref(flat)
    return list(rr[:rk].reshape(rk, p.dim, p.right_algebra.dim))


def _zeta_map(r: RecollementSpec, jh: mc.Bimodule, ae: mc.Bimodule, hc: mc.Bimodule) -> np.ndarray:
    """``A -> Ae ⊗_C Hom_C(Ae, C)``, the image of ``a`` corresponding to ``x -> a x`` on ``Ae``."""
    p = el.prime()
    c = r.outer2
    fb = _hom_matrices(ae, c)  # basis of Hom_C(Ae, C) matching hc's coordinates
    # evaluation of a pair (x_i ⊗ f_j) as an endomorphism of Ae: y -> x_i f_j(y)
    lm = c.mult  # in C
    cols = []
    for i, j in jh.kept:
        f = fb[j]  # dim Ae x dim C ; y -> y @ f  in C coords
        xi = ae.right  # x_i . c = row i of ae.right[c]
        # the endomorphism y -> x_i * f(y): matrix dim Ae x dim Ae
        end = np.einsum("yc,cz->yz", f, xi[:, i, :]) % p
        cols.append(end.reshape(-1))
    ev = np.stack(cols) if cols else el.zeros(0, ae.dim * ae.dim)
    a = r.middle
    out = el.zeros(a.dim, jh.dim)
    for b in range(a.dim):
        target = ae.left[b].reshape(-1)  # y -> b y in row convention: y @ left[b]
        sol = el.solve_rows(ev, target)
        if sol is None:
            raise NotStratifying("Ae ⊗_C Hom_C(Ae, C) -> End_C(Ae) is not onto")
        out[b] = sol[0]
    return out


# --------------------------------------------------------------- counit / unit as chain maps


def counit_jshriek(r: RecollementSpec, x: ht.BasedComplex) -> tuple[ht.ModComplex, ht.ModComplex, dict]:
    """``eps_X : X ⊗ (Ae ⊗_C eA) -> X`` termwise, before replacement."""
    u = unit_data(r)
    src = tensor_complex(x, u["jj"])
    tgt = x.to_modules()
    return src, tgt, bimodule_chain_map(x, u["jj"], r.bimodules["A"], u["mu"])


def unit_istar(r: RecollementSpec, x: ht.BasedComplex) -> tuple[ht.ModComplex, ht.ModComplex, dict]:
    """``eta_X : X -> X ⊗ (A/AeA ⊗_B A/AeA)`` termwise."""
    u = unit_data(r)
    return x.to_modules(), tensor_complex(x, u["ii"]), bimodule_chain_map(x, r.bimodules["A"], u["ii"], u["eta"])


def counit_ishriek(r: RecollementSpec, x: ht.BasedComplex):
    u = unit_data(r)
    return tensor_complex(x, u["ih"]), x.to_modules(), bimodule_chain_map(x, u["ih"], r.bimodules["A"], u["omega"])


def unit_jlower(r: RecollementSpec, x: ht.BasedComplex):
    u = unit_data(r)
    return x.to_modules(), tensor_complex(x, u["jh"]), bimodule_chain_map(x, r.bimodules["A"], u["jh"], u["zeta"])


def triangle_comparison(first, second) -> bool:
    """For ``f : U -> X`` and ``g : X -> W`` with ``g f = 0``, check ``(0, g) : cone(f) -> W`` is a quasi-iso."""
    u, x, f = first
    x2, w, g = second
    p = el.prime()
    c = ht.mod_cone(u, x, f)
    comp = {}
    for n in c.degrees:
        rows_u = u.dim(n + 1)
        m = el.zeros(c.dim(n), w.dim(n))
        if n in g and x.dim(n):
            m[rows_u:, :] = g[n]
        comp[n] = m
    return ht.is_quasi_iso(c, w, comp)


# --------------------------------------------------------------- verification


class Evaluator:
    """Memoized functor application on pool members."""

    def __init__(self, cap: int = 48):
        self.cap = cap
        self.memo = {}

    def __call__(self, f: FunctorSpec, x: ht.BasedComplex) -> ht.BasedComplex:
        k = (_functor_key(f), id(x.algebra), x.key())
        if k not in self.memo:
            self.memo[k] = apply(f, x, self.cap)
        return self.memo[k]


def _functor_key(f: FunctorSpec) -> tuple:
    # structural key: temporary FunctorSpec objects may share ids after collection
    if f.kind == "composite":
        return ("composite",) + tuple(_functor_key(g) for g in f.parts)
    return (f.kind, id(f.source), id(f.target), id(f.bimodule))


def default_pools(r: RecollementSpec, seed: int, size: int) -> dict:
    return {"A": ht.sample_pool(r.middle, seed, size),
            "B": ht.sample_pool(r.outer, seed + 1, size),
            "C": ht.sample_pool(r.outer2, seed + 2, size)}


def sample_pairs(rng, n1: int, n2: int, count: int) -> list[tuple[int, int]]:
    if n1 == 0 or n2 == 0:
        return []
    allp = [(i, j) for i in range(n1) for j in range(n2)]
    if len(allp) <= count:
        return allp
    idx = rng.choice(len(allp), size=count, replace=False)
    return [allp[int(t)] for t in sorted(idx)]


def _iso_status(verdict: str) -> str:
    return {"iso": "pass", "noniso": "fail"}.get(verdict, "undetermined")


def adjunction_entries(axiom, left: FunctorSpec, right: FunctorSpec, lpool, rpool, pairs, ev) -> list:
    """``dim Hom(F X, Y) = dim Hom(X, G Y)`` for ``F = left``, ``G = right``."""
    out = []
    for i, j in pairs:
        x, y = lpool[i], rpool[j]
        lhs = ht.hom_dim(ev(left, x), y)
        rhs = ht.hom_dim(x, ev(right, y))
        status = "pass" if lhs == rhs else "fail"
        wit = None if status == "pass" else {"X": report.complex_json(x), "Y": report.complex_json(y)}
        out.append(report.entry(axiom, status, f"({left.name},{right.name})", wit, pair=[i, j], lhs=lhs, rhs=rhs))
    return out


def verify_recollement(r: RecollementSpec, pools: dict | None = None, seed: int = 7,
                       pool_size: int = 12, pair_count: int = 24, cap: int = 48) -> dict:
    pools = pools or default_pools(r, seed, pool_size)
    rng = np.random.default_rng(seed)
    ev = Evaluator(cap)
    pa, pb, pc = pools["A"], pools["B"], pools["C"]
    entries = []
    # (R1) adjoint pairs
    for left, right, lp, rp in [(r.i_upper, r.i_lower, pa, pb), (r.i_lower, r.i_shriek, pb, pa),
                                (r.j_shriek, r.j_upper, pc, pa), (r.j_upper, r.j_lower, pa, pc)]:
        pairs = sample_pairs(rng, len(lp), len(rp), pair_count)
        entries += adjunction_entries("R1", left, right, lp, rp, pairs, ev)
    # (R2) full faithfulness at Hom-dimension level, plus unit/counit isomorphisms
    for f, pool in [(r.i_lower, pb), (r.j_shriek, pc), (r.j_lower, pc)]:
        for i, j in sample_pairs(rng, len(pool), len(pool), pair_count):
            lhs = ht.hom_dim(pool[i], pool[j])
            rhs = ht.hom_dim(ev(f, pool[i]), ev(f, pool[j]))
            st = "pass" if lhs == rhs else "fail"
            wit = None if st == "pass" else {"X": report.complex_json(pool[i]), "Y": report.complex_json(pool[j])}
            entries.append(report.entry("R2", st, f"faithful {f.name}", wit, pair=[i, j], lhs=lhs, rhs=rhs))
    for back, f, pool in [(r.i_upper, r.i_lower, pb), (r.j_upper, r.j_shriek, pc), (r.j_upper, r.j_lower, pc)]:
        for i, x in enumerate(pool):
            v = ht.iso_test(ev(back, ev(f, x)), x, seed=seed)
            st = _iso_status(v)
            entries.append(report.entry("R2", st, f"{back.name}{f.name} = id", None if st == "pass" else
                                        {"X": report.complex_json(x)}, index=i, verdict=v))
    # (R3) vanishing compositions
    zero = mc.tensor_bimodules(r.bimodules["A/AeA_BA"], r.bimodules["Ae"])[0].dim
    entries.append(report.entry("R3", "pass" if zero == 0 else "fail", "(B,0) ⊗_A Ae = 0", dim=zero))
    for first, second, pool in [(r.i_lower, r.j_upper, pb), (r.j_shriek, r.i_upper, pc),
                                (r.j_lower, r.i_shriek, pc)]:
        for i, x in enumerate(pool):
            h = ht.homology_dims(ev(second, ev(first, x)))
            st = "pass" if not h else "fail"
            entries.append(report.entry("R3", st, f"{second.name}{first.name} = 0",
                                        None if st == "pass" else {"X": report.complex_json(x)}, index=i))
    # (R4) both triangles through explicit comparison maps
    ii = compose(r.i_upper, r.i_lower)
    jj = compose(r.j_upper, r.j_lower)
    for i, x in enumerate(pa):
        c1, c2 = counit_jshriek(r, x), unit_istar(r, x)
        ok = triangle_comparison(c1, c2)
        cone1 = ht.projective_replacement(ht.mod_cone(*c1), cap)
        v = ht.iso_test(cone1, ev(ii, x), seed=seed)
        st = "pass" if ok and v == "iso" else ("fail" if not ok or v == "noniso" else "undetermined")
        entries.append(report.entry("R4", st, "cone(eps) = i_*i^*", None if st == "pass" else
                                    {"X": report.complex_json(x)}, index=i, quasi_iso=ok, verdict=v))
        d1, d2 = counit_ishriek(r, x), unit_jlower(r, x)
        ok2 = triangle_comparison(d1, d2)
        cone2 = ht.projective_replacement(ht.mod_cone(*d1), cap)
        v2 = ht.iso_test(cone2, ev(jj, x), seed=seed)
        st = "pass" if ok2 and v2 == "iso" else ("fail" if not ok2 or v2 == "noniso" else "undetermined")
        entries.append(report.entry("R4", st, "cone(omega) = j_*j^*", None if st == "pass" else
                                    {"X": report.complex_json(x)}, index=i, quasi_iso=ok2, verdict=v2))
    # Ker j^* = Im i_*
    for i, x in enumerate(pa):
        if ht.homology_dims(ev(r.j_upper, x)):
            continue
        v = ht.iso_test(x, ev(ii, x), seed=seed)
        st = _iso_status(v)
        entries.append(report.entry("Im/Ker", st, "j^*X = 0 implies X = i_*i^*X",
                                    None if st == "pass" else {"X": report.complex_json(x)}, index=i, verdict=v))
    entries = report.sort_entries(entries)
    return {"mode": "recollement", "seed": seed, "pool_sizes": {k: len(v) for k, v in pools.items()},
            "summary": report.summarize(entries), "entries": entries}
