"""Bounded complexes of projectives in based form.

A ``BasedComplex`` is cohomologically graded, ``d^n : X^n -> X^{n+1}``.
``terms[n]`` lists vertices ``i`` with ``X^n = ⊕ e_i A``; ``diffs[n]`` has
shape ``(len terms[n+1], len terms[n], dim A)`` and entry ``(r, s)`` in
``e_{i_r} A e_{i_s}``, acting ``e_{i_s}A -> e_{i_r}A`` by left multiplication.
Composition of based maps is an algebra-valued matrix product.

A ``ModComplex`` is the k-linear shadow: one module per degree and row
convention matrices between them.  It is what functors produce before
projective replacement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactlin as el
from .algebra import Algebra
from . import modcat as mc


class ReplacementCapExceeded(RuntimeError):
    """Projective replacement did not stop within the width cap."""


def bmul(a: Algebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Based matrix product ``x * y`` (apply ``y`` first)."""
    if x.shape[1] == 0 or x.shape[0] == 0 or y.shape[1] == 0:
        return np.zeros((x.shape[0], y.shape[1], a.dim), dtype=np.int64)
    return np.einsum("qri,rsj,ijk->qsk", x, y, a.mult) % el.prime()


def _empty(rows: int, cols: int, d: int) -> np.ndarray:
    return np.zeros((rows, cols, d), dtype=np.int64)


@dataclass
class BasedComplex:
    algebra: Algebra
    terms: dict = field(default_factory=dict)
    diffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {n: tuple(t) for n, t in self.terms.items() if len(t)}
        d = self.algebra.dim
        clean = {}
        for n in self.degrees:
            if n + 1 in self.terms:
                m = self.diffs.get(n)
                if m is None:
                    m = _empty(len(self.terms[n + 1]), len(self.terms[n]), d)
                clean[n] = np.asarray(m, dtype=np.int64) % el.prime()
        self.diffs = clean

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def term(self, n: int) -> tuple:
        return self.terms.get(n, ())

    def diff(self, n: int) -> np.ndarray:
        if n in self.diffs:
            return self.diffs[n]
        return _empty(len(self.term(n + 1)), len(self.term(n)), self.algebra.dim)

    @property
    def width(self) -> int:
        return sum(len(t) for t in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def euler(self) -> np.ndarray:
        v = np.zeros(self.algebra.nvert, dtype=np.int64)
        for n, t in self.terms.items():
            for i in t:
                v[i] += (-1) ** (n % 2)
        return v

    def multiplicities(self) -> dict:
        out = {}
        for n, t in self.terms.items():
            v = [0] * self.algebra.nvert
            for i in t:
                v[i] += 1
            out[n] = tuple(v)
        return out

    def check(self) -> None:
        a = self.algebra
        for n, m in self.diffs.items():
            src, tgt = self.term(n), self.term(n + 1)
            for r, i in enumerate(tgt):
                for s, j in enumerate(src):
                    allowed = set(a.corner_basis(i, j))
                    bad = [b for b in np.nonzero(m[r, s])[0] if b not in allowed]
                    if bad:
                        raise ValueError(f"entry ({r},{s}) of d^{n} leaves its corner")
        for n in self.diffs:
            if n + 1 in self.diffs and bmul(a, self.diffs[n + 1], self.diffs[n]).any():
                raise ValueError(f"d^{n + 1} d^{n} != 0")

    def lin(self, n: int) -> np.ndarray:
        """k-linear matrix of ``d^n`` in row convention."""
        return mc.based_matrix(self.algebra, self.term(n), self.term(n + 1), self.diff(n))

    def is_minimal(self) -> bool:
        a = self.algebra
        for n, m in self.diffs.items():
            for r, i in enumerate(self.term(n + 1)):
                for s, j in enumerate(self.term(n)):
                    if i == j and m[r, s, a.idem[i]] % el.prime():
                        return False
        return True

    def to_modules(self) -> "ModComplex":
        mods = {n: mc.free_module(self.algebra, t) for n, t in self.terms.items()}
        maps = {n: self.lin(n) for n in self.diffs}
        return ModComplex(self.algebra, mods, maps)

    def key(self) -> tuple:
        """Hashable exact description, for determinism checks and dedup."""
        return (tuple((n, self.terms[n]) for n in self.degrees),
                tuple((n, self.diffs[n].tobytes()) for n in sorted(self.diffs)))


@dataclass
class ChainMap:
    source: BasedComplex
    target: BasedComplex
    comp: dict

    def component(self, n: int) -> np.ndarray:
        if n in self.comp:
            return self.comp[n]
        return _empty(len(self.target.term(n)), len(self.source.term(n)), self.source.algebra.dim)

    def check(self) -> bool:
        a = self.source.algebra
        degs = set(self.source.degrees) | set(self.target.degrees)
        for n in degs:
            lhs = bmul(a, self.target.diff(n), self.component(n))
            rhs = bmul(a, self.component(n + 1), self.source.diff(n))
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def lin(self, n: int) -> np.ndarray:
        return mc.based_matrix(self.source.algebra, self.source.term(n), self.target.term(n),
                               self.component(n))


@dataclass
class ModComplex:
    """Bounded complex of modules: ``modules[n]`` and ``maps[n] : M^n -> M^{n+1}``."""

    algebra: Algebra
    modules: dict
    maps: dict

    def module(self, n: int) -> mc.Module:
        return self.modules.get(n) or mc.zero_module(self.algebra)

    def dim(self, n: int) -> int:
        m = self.modules.get(n)
        return m.dim if m is not None else 0

    def map(self, n: int) -> np.ndarray:
        if n in self.maps:
            return self.maps[n]
        return el.zeros(self.dim(n), self.dim(n + 1))

    @property
    def degrees(self) -> list[int]:
        return sorted(n for n, m in self.modules.items() if m.dim)


def zero_complex(a: Algebra) -> BasedComplex:
    return BasedComplex(a, {}, {})


def stalk(a: Algebra, vertices, degree: int = 0) -> BasedComplex:
    return BasedComplex(a, {degree: tuple(vertices)}, {})


def shift(x: BasedComplex, k: int = 1) -> BasedComplex:
    sign = -1 if k % 2 else 1
    terms = {n - k: t for n, t in x.terms.items()}
    diffs = {n - k: (sign * m) % el.prime() for n, m in x.diffs.items()}
    return BasedComplex(x.algebra, terms, diffs)


def direct_sum(xs: list[BasedComplex]) -> BasedComplex:
    a = xs[0].algebra
    degs = sorted(set().union(*[set(x.degrees) for x in xs]))
    terms = {n: sum((x.term(n) for x in xs), ()) for n in degs}
    diffs = {}
    for n in degs:
        rows = len(terms.get(n + 1, ()))
        if not rows:
            continue
        m = _empty(rows, len(terms[n]), a.dim)
        ro = co = 0
        for x in xs:
            r, c = len(x.term(n + 1)), len(x.term(n))
            m[ro:ro + r, co:co + c] = x.diff(n)
            ro += r
            co += c
        diffs[n] = m
    return BasedComplex(a, terms, diffs)


def identity_map(x: BasedComplex) -> ChainMap:
    a = x.algebra
    comp = {}
    for n, t in x.terms.items():
        m = _empty(len(t), len(t), a.dim)
        for s, i in enumerate(t):
            m[s, s, a.idem[i]] = 1
        comp[n] = m
    return ChainMap(x, x, comp)


def cone(f: ChainMap) -> BasedComplex:
    """``cone(f)^n = X^{n+1} ⊕ Y^n`` with ``d = [[-d_X, 0], [f, d_Y]]``."""
    x, y = f.source, f.target
    a = x.algebra
    degs = sorted(set(n - 1 for n in x.degrees) | set(y.degrees))
    terms = {n: x.term(n + 1) + y.term(n) for n in degs}
    diffs = {}
    p = el.prime()
    for n in degs:
        tx, ty = len(x.term(n + 1)), len(y.term(n))
        ux, uy = len(x.term(n + 2)), len(y.term(n + 1))
        if ux + uy == 0:
            continue
        m = _empty(ux + uy, tx + ty, a.dim)
        m[:ux, :tx] = (-x.diff(n + 1)) % p
        m[ux:, :tx] = f.component(n + 1)
        m[ux:, tx:] = y.diff(n)
        diffs[n] = m
    return BasedComplex(a, terms, diffs)


# ------------------------------------------------------------- homology


def mod_homology_dims(c: ModComplex) -> dict:
    out = {}
    degs = c.degrees
    for n in degs:
        dn = c.dim(n)
        ker = dn - (el.rank(c.map(n)) if c.dim(n + 1) else 0)
        im = el.rank(c.map(n - 1)) if c.dim(n - 1) else 0
        h = ker - im
        if h:
            out[n] = h
    return out


def homology_dims(x: BasedComplex) -> dict:
    return mod_homology_dims(x.to_modules())


def homology_modules(x: BasedComplex) -> dict:
    """``H^n`` as modules (only nonzero degrees)."""
    out = {}
    mods = x.to_modules()
    for n in mods.degrees:
        m = mods.module(n)
        ker_rows = el.left_kernel(mods.map(n)) if mods.dim(n + 1) else el.identity(m.dim)
        zmod, zrows = mc.submodule(m, ker_rows)
        if zmod.dim == 0:
            continue
        im = el.row_space(mods.map(n - 1)) if mods.dim(n - 1) else el.zeros(0, m.dim)
        if im.shape[0]:
            coords = el.solve_rows(zrows, im)
            hmod, _ = mc.quotient(zmod, coords)
        else:
            hmod = zmod
        if hmod.dim:
            out[n] = hmod
    return out


def is_acyclic(x) -> bool:
    if isinstance(x, BasedComplex):
        return not homology_dims(x)
    return not mod_homology_dims(x)


def mod_cone(c: ModComplex, d: ModComplex, f: dict) -> ModComplex:
    """Mapping cone of a k-linear chain map ``f[n] : C^n -> D^n``."""
    degs = sorted(set(n - 1 for n in c.degrees) | set(d.degrees))
    mods, maps = {}, {}
    p = el.prime()
    for n in degs:
        mods[n] = mc.direct_sum([c.module(n + 1), d.module(n)])
    for n in degs:
        if n + 1 not in mods:
            continue
        cx, dy = c.dim(n + 1), d.dim(n)
        ux, uy = c.dim(n + 2), d.dim(n + 1)
        m = el.zeros(cx + dy, ux + uy)
        m[:cx, :ux] = (-c.map(n + 1)) % p
        fn = f.get(n + 1)
        if fn is not None and cx and uy:
            m[:cx, ux:] = fn
        m[cx:, ux:] = d.map(n)
        maps[n] = m
    return ModComplex(c.algebra, mods, maps)


def is_mod_chain_map(c: ModComplex, d: ModComplex, f: dict) -> bool:
    p = el.prime()
    for n in set(c.degrees) | set(d.degrees):
        fn = f.get(n, el.zeros(c.dim(n), d.dim(n)))
        fn1 = f.get(n + 1, el.zeros(c.dim(n + 1), d.dim(n + 1)))
        if not np.array_equal((c.map(n) @ fn1) % p, (fn @ d.map(n)) % p):
            return False
    return True


def is_quasi_iso(c: ModComplex, d: ModComplex, f: dict) -> bool:
    return is_mod_chain_map(c, d, f) and not mod_homology_dims(mod_cone(c, d, f))


# ------------------------------------------------------------- Hom complexes


class _HomIndex:
    """Coordinates of ``Hom^k(X, Y) = prod_p Hom(X^p, Y^{p+k})``."""

    def __init__(self, x: BasedComplex, y: BasedComplex, k: int):
        a = x.algebra
        self.blocks = {}
        off = 0
        for p_ in x.degrees:
            ty = y.term(p_ + k)
            for s, j in enumerate(x.term(p_)):
                for r, i in enumerate(ty):
                    idx = a.corner_basis(i, j)
                    if idx:
                        self.blocks[(p_, r, s)] = (off, idx)
                        off += len(idx)
        self.size = off


def _hom_differential(x: BasedComplex, y: BasedComplex, k: int, src: _HomIndex, tgt: _HomIndex):
    """Matrix (row convention) of ``f -> d_Y f - (-1)^k f d_X`` on ``Hom^k -> Hom^{k+1}``."""
    a = x.algebra
    p = el.prime()
    out = el.zeros(src.size, tgt.size)
    sign = -1 if k % 2 else 1
    for (p_, r, s), (off, idx) in src.blocks.items():
        dy = y.diff(p_ + k)
        for r2 in range(dy.shape[0]):
            z = dy[r2, r]
            dest = tgt.blocks.get((p_, r2, s))
            if dest is None or not z.any():
                continue
            lm = np.einsum("i,ijk->jk", z, a.mult)  # b -> z b
            out[off:off + len(idx), dest[0]:dest[0] + len(dest[1])] += lm[np.ix_(idx, dest[1])]
        dx = x.diff(p_ - 1)
        for s2 in range(dx.shape[1]):
            z = dx[s, s2]
            dest = tgt.blocks.get((p_ - 1, r, s2))
            if dest is None or not z.any():
                continue
            rm = np.einsum("j,ijk->ik", z, a.mult)  # b -> b z
            out[off:off + len(idx), dest[0]:dest[0] + len(dest[1])] -= sign * rm[np.ix_(idx, dest[1])]
    return out % p


def _vector_to_map(x: BasedComplex, y: BasedComplex, idx: _HomIndex, v, k: int = 0) -> ChainMap:
    a = x.algebra
    comp = {}
    for (p_, r, s), (off, bs) in idx.blocks.items():
        if p_ not in comp:
            comp[p_] = _empty(len(y.term(p_ + k)), len(x.term(p_)), a.dim)
        comp[p_][r, s, bs] = v[off:off + len(bs)]
    return ChainMap(x, y, comp)


def chain_map_space(x: BasedComplex, y: BasedComplex):
    """Basis of chain maps ``X -> Y`` as coordinate rows, with the index."""
    i0 = _HomIndex(x, y, 0)
    i1 = _HomIndex(x, y, 1)
    if i0.size == 0:
        return el.zeros(0, 0), i0
    d0 = _hom_differential(x, y, 0, i0, i1)
    z = el.left_kernel(d0) if i1.size else el.identity(i0.size)
    return z, i0


def hom_mod_homotopy(x: BasedComplex, y: BasedComplex) -> tuple[int, list]:
    if x.algebra is not y.algebra:
        raise ValueError("complexes over different algebras")
    z, i0 = chain_map_space(x, y)
    if z.shape[0] == 0:
        return 0, []
    im1 = _HomIndex(x, y, -1)
    if im1.size:
        b = el.row_space(_hom_differential(x, y, -1, im1, i0))
    else:
        b = el.zeros(0, i0.size)
    reps = el.extend_basis(b, z)
    return reps.shape[0], [_vector_to_map(x, y, i0, v) for v in reps]


def hom_dim(x: BasedComplex, y: BasedComplex) -> int:
    z, i0 = chain_map_space(x, y)
    if z.shape[0] == 0:
        return 0
    im1 = _HomIndex(x, y, -1)
    if not im1.size:
        return z.shape[0]
    return z.shape[0] - el.rank(_hom_differential(x, y, -1, im1, i0))


# ------------------------------------------------------------- minimization


def _find_unit(x: BasedComplex):
    a = x.algebra
    p = el.prime()
    for n in sorted(x.diffs):
        m = x.diffs[n]
        src, tgt = x.term(n), x.term(n + 1)
        for r, i in enumerate(tgt):
            for s, j in enumerate(src):
                if i == j and m[r, s, a.idem[i]] % p:
                    return n, r, s
    return None


def minimize(x: BasedComplex) -> BasedComplex:
    """Split off contractible summands until all differentials are radical."""
    a = x.algebra
    terms = {n: list(t) for n, t in x.terms.items()}
    diffs = {n: m.copy() for n, m in x.diffs.items()}
    cur = x
    while True:
        hit = _find_unit(cur)
        if hit is None:
            return cur
        n, r, s = hit
        d = cur.diffs[n]
        v = cur.term(n)[s]
        inv = a.corner_inverse(d[r, s], v)
        keep_r = [q for q in range(d.shape[0]) if q != r]
        keep_s = [t for t in range(d.shape[1]) if t != s]
        gamma = d[keep_r][:, [s]]
        delta = d[[r]][:, keep_s]
        eps = d[np.ix_(keep_r, keep_s)]
        corr = bmul(a, bmul(a, gamma, inv[None, None, :]), delta)
        terms = {k: list(t) for k, t in cur.terms.items()}
        diffs = {k: m for k, m in cur.diffs.items()}
        diffs[n] = (eps - corr) % el.prime()
        if n - 1 in diffs:
            diffs[n - 1] = diffs[n - 1][keep_s]
        if n + 1 in diffs:
            diffs[n + 1] = diffs[n + 1][:, keep_r]
        terms[n] = [terms[n][t] for t in keep_s]
        terms[n + 1] = [terms[n + 1][q] for q in keep_r]
        cur = BasedComplex(a, {k: tuple(t) for k, t in terms.items()}, diffs)


# ------------------------------------------------------------- replacement


@dataclass
class Replacement:
    complex: BasedComplex
    comparison: dict  # degree -> k-linear matrix P^n -> M^n

    def verify(self, source: ModComplex) -> bool:
        return is_quasi_iso(self.complex.to_modules(), source, self.comparison)


def projective_replacement(c: ModComplex, cap: int = 48, minimal: bool = True,
                           verify: bool = False) -> BasedComplex | Replacement:
    """A based complex quasi-isomorphic to ``c``, built degree by degree from the top."""
    a = c.algebra
    p = el.prime()
    degs = c.degrees
    if not degs:
        out = zero_complex(a)
        return Replacement(out, {}) if verify else out
    top, bottom = degs[-1], degs[0]
    terms, diffs, comp = {}, {}, {}
    width = 0
    n = top
    while True:
        ptop = terms.get(n + 1, ())
        pmod = mc.free_module(a, ptop)
        mmod = c.module(n)
        # cone degree n: P^{n+1} ⊕ M^n, d(p, m) = (-p d_P, p phi + m d_M)
        cone_mod = mc.direct_sum([pmod, mmod])
        nxt_p = mc.free_module(a, terms.get(n + 2, ()))
        cols_p, cols_m = nxt_p.dim, c.dim(n + 1)
        big = el.zeros(pmod.dim + mmod.dim, cols_p + cols_m)
        if pmod.dim and cols_p:
            big[:pmod.dim, :cols_p] = (-mc.based_matrix(a, ptop, terms.get(n + 2, ()), diffs[n + 1])) % p
        if pmod.dim and cols_m:
            big[:pmod.dim, cols_p:] = comp[n + 1]
        if mmod.dim and cols_m:
            big[pmod.dim:, cols_p:] = c.map(n)
        krows = el.left_kernel(big) if big.shape[1] else el.identity(big.shape[0])
        kmod, krows = mc.submodule(cone_mod, krows)
        if kmod.dim == 0:
            if n < bottom:
                break
            n -= 1
            continue
        gterms, gcov = mc.projective_cover(kmod)
        gens_full = (gcov @ krows) % p  # images of the free basis in cone coordinates
        starts = np.cumsum([0] + [len(a.row_basis(i)) for i in gterms])
        gen_rows = [starts[t] + a.row_basis(gterms[t]).index(a.idem[gterms[t]]) for t in range(len(gterms))]
        gvecs = gens_full[gen_rows]
        width += len(gterms)
        if width > cap:
            raise ReplacementCapExceeded(
                f"projective replacement exceeded width {cap}; the complex leaves K^b(proj)")
        terms[n] = tuple(gterms)
        if ptop:
            diffs[n] = mc._generator_entries(a, ptop, [(-v[:pmod.dim]) % p for v in gvecs], gterms)
        # phi^n on the free module: basis element b of e_r A maps to m_t b
        comp[n] = gens_full[:, pmod.dim:] % p
        n -= 1
    out = BasedComplex(a, terms, diffs)
    if verify:
        # comparison maps are tracked for the unminimized complex
        return Replacement(out, comp)
    return minimize(out) if minimal else out


def module_complex(m: mc.Module, degree: int = 0) -> ModComplex:
    return ModComplex(m.algebra, {degree: m}, {})


# ------------------------------------------------------------- iso testing


def iso_test(x: BasedComplex, y: BasedComplex, attempts: int = 64, seed: int = 0) -> str:
    x, y = minimize(x), minimize(y)
    if x.multiplicities() != y.multiplicities():
        return "noniso"
    if x.is_zero():
        return "iso"
    z, i0 = chain_map_space(x, y)
    if z.shape[0] == 0:
        return "noniso"
    rng = np.random.default_rng(seed)
    p = el.prime()
    for _ in range(attempts):
        c = rng.integers(0, p, size=z.shape[0])
        v = (c @ z) % p
        f = _vector_to_map(x, y, i0, v)
        if all(el.is_invertible(f.lin(n)) for n in x.degrees):
            return "iso"
    return "undetermined"


# ------------------------------------------------------------- sample pools


def random_chain_map(x: BasedComplex, y: BasedComplex, rng) -> ChainMap | None:
    z, i0 = chain_map_space(x, y)
    if z.shape[0] == 0:
        return None
    c = rng.integers(0, el.prime(), size=z.shape[0])
    return _vector_to_map(x, y, i0, (c @ z) % el.prime())


def sample_pool(a: Algebra, seed: int, size: int, degree_span: int = 1,
                max_width: int = 8) -> list[BasedComplex]:
    """Deterministic pool: projective stalks, cones of random maps, sums."""
    rng = np.random.default_rng(seed)
    pool: list[BasedComplex] = []
    seen = set()

    def add(c: BasedComplex) -> None:
        c = minimize(c)
        if c.is_zero() or c.width > max_width:
            return
        k = c.key()
        if k not in seen:
            seen.add(k)
            pool.append(c)

    for i in range(a.nvert):
        add(stalk(a, [i]))
        if len(pool) >= size:
            return pool[:size]
    tries = 0
    while len(pool) < size and tries < 40 * size:
        tries += 1
        kind = rng.integers(0, 4)
        if kind == 0 and degree_span:
            base = pool[int(rng.integers(0, len(pool)))]
            add(shift(base, int(rng.integers(-degree_span, degree_span + 1))))
            continue
        if kind == 1 and len(pool) >= 2:
            i, j = rng.choice(len(pool), size=2, replace=False)
            add(direct_sum([pool[int(i)], pool[int(j)]]))
            continue
        x = pool[int(rng.integers(0, len(pool)))]
        y = pool[int(rng.integers(0, len(pool)))]
        k = int(rng.integers(-1, 2)) if degree_span else 0
        ys = shift(y, k)
        f = random_chain_map(x, ys, rng)
        if f is None:
            continue
        add(cone(f))
    return pool[:size]
