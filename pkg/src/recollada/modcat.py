"""Finitely generated right modules and bimodules, Hom, Ext and resolutions.

All modules are right modules in row convention: ``act[b]`` is the
``dim x dim`` matrix with ``v . b = v @ act[b]``.  A left ``A``-module is a
right module over ``A.opposite()``.  A module map is a ``dim_src x dim_tgt``
matrix ``F`` acting by ``v -> v @ F``.

Modules are kept adapted: every basis vector lies in ``m e_i`` for one
vertex ``i`` (recorded in ``vertex``).  Bimodules are adapted for both
idempotent systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import exactlin as el
from .algebra import Algebra


class ModuleError(ValueError):
    pass


class ResolutionCapExceeded(RuntimeError):
    pass


def _vertices_of(idem_mats) -> list[int]:
    n = idem_mats[0].shape[0] if idem_mats else 0
    vert = [-1] * n
    for i, e in enumerate(idem_mats):
        diag = np.diag(e)
        if not np.array_equal(e, np.diag(diag)):
            return None
        for r in np.nonzero(diag)[0]:
            if vert[r] != -1:
                return None
            vert[r] = i
    if any(v == -1 for v in vert):
        return None
    return vert


def _adapting_basis(projectors, n: int) -> np.ndarray:
    pieces = [el.row_space(pr) for pr in projectors]
    t = np.concatenate(pieces, axis=0) if pieces else el.zeros(0, n)
    if t.shape[0] != n:
        raise ModuleError("idempotent actions do not decompose the space")
    return t


class Module:
    def __init__(self, algebra: Algebra, act, name: str = "", check: bool = False):
        self.algebra = algebra
        self.act = np.asarray(act, dtype=np.int64) % el.prime()
        if self.act.ndim != 3:
            self.act = self.act.reshape(algebra.dim, 0, 0)
        self.dim = self.act.shape[1]
        self.name = name
        if check:
            self.validate()
        vert = _vertices_of([self.act[e] for e in algebra.idem])
        if vert is None:
            t = _adapting_basis([self.act[e] for e in algebra.idem], self.dim)
            ti = el.inverse(t)
            self.act = np.einsum("ij,bjk,kl->bil", t, self.act, ti) % el.prime()
            vert = _vertices_of([self.act[e] for e in algebra.idem])
            self.rebased = t
        self.vertex = vert

    def __repr__(self):
        return f"Module(dim={self.dim}, dimvec={self.dimvec.tolist()})"

    def validate(self) -> None:
        a = self.algebra
        p = el.prime()
        if self.act.shape != (a.dim, self.dim, self.dim):
            raise ModuleError("action array has the wrong shape")
        lhs = np.einsum("inm,jmk->ijnk", self.act, self.act) % p
        rhs = np.einsum("ijl,lnk->ijnk", a.mult, self.act) % p
        if not np.array_equal(lhs, rhs):
            raise ModuleError("action does not respect the multiplication")
        unit = np.einsum("b,bij->ij", a.unit, self.act) % p
        if not np.array_equal(unit, el.identity(self.dim)):
            raise ModuleError("unit does not act as the identity")

    @cached_property
    def dimvec(self) -> np.ndarray:
        v = np.zeros(self.algebra.nvert, dtype=np.int64)
        for x in self.vertex:
            v[x] += 1
        return v

    def at(self, i: int) -> list[int]:
        return [r for r, x in enumerate(self.vertex) if x == i]

    @cached_property
    def radical_rows(self) -> np.ndarray:
        rad = self.algebra.radical_basis
        if not rad or self.dim == 0:
            return el.zeros(0, self.dim)
        return el.row_space(np.concatenate([self.act[b] for b in rad], axis=0))

    @cached_property
    def top_coords(self) -> list[int]:
        """Basis coordinates whose classes form a basis of ``m / m rad A``."""
        return el.complement_columns(self.radical_rows, self.dim)

    @cached_property
    def topvec(self) -> np.ndarray:
        v = np.zeros(self.algebra.nvert, dtype=np.int64)
        for c in self.top_coords:
            v[self.vertex[c]] += 1
        return v

    @cached_property
    def socle_rows(self) -> np.ndarray:
        rad = self.algebra.generators[self.algebra.nvert:]
        if not rad:
            return el.identity(self.dim)
        stacked = np.concatenate([self.act[b] for b in rad], axis=1)
        return el.row_space(_left_null(stacked))

    def is_zero(self) -> bool:
        return self.dim == 0


def _left_null(m: np.ndarray) -> np.ndarray:
    return el.kernel_rows(m.T)


@dataclass
class ModuleMap:
    source: Module
    target: Module
    matrix: np.ndarray  # dim source x dim target, v -> v @ matrix

    def is_intertwiner(self) -> bool:
        a = self.source.algebra
        p = el.prime()
        for b in a.generators:
            if not np.array_equal((self.source.act[b] @ self.matrix) % p,
                                  (self.matrix @ self.target.act[b]) % p):
                return False
        return True


def zero_module(a: Algebra) -> Module:
    return Module(a, np.zeros((a.dim, 0, 0), dtype=np.int64))


def submodule(m: Module, rows) -> tuple[Module, np.ndarray]:
    """Submodule on an invariant subspace; returns it and its inclusion matrix."""
    if m.dim == 0:
        return m, el.zeros(0, 0)
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, m.dim)
    r, piv, rk = el.rref(rows) if rows.shape[0] else (rows, [], 0)
    r = r[:rk]
    if rk == 0:
        return zero_module(m.algebra), el.zeros(0, m.dim)
    act = np.einsum("ij,bjk->bik", r, m.act)[:, :, piv] % el.prime()
    return Module(m.algebra, act), r


def quotient(m: Module, rows) -> tuple[Module, np.ndarray]:
    """Quotient by an invariant subspace; returns it and the projection matrix."""
    if m.dim == 0:
        return m, el.zeros(0, 0)
    q, keep = el.quotient_projection(np.asarray(rows, dtype=np.int64).reshape(-1, m.dim), m.dim)
    act = np.einsum("bij,jk->bik", m.act[:, keep, :], q) % el.prime()
    return Module(m.algebra, act), q


def generated(m: Module, vectors) -> np.ndarray:
    """Reduced basis of the submodule generated by the given vectors."""
    if m.dim == 0:
        return el.zeros(0, 0)
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, m.dim)
    if vectors.shape[0] == 0:
        return el.zeros(0, m.dim)
    rows = np.einsum("vi,bij->bvj", vectors, m.act).reshape(-1, m.dim)
    return el.row_space(rows)


def kernel(f: ModuleMap) -> tuple[Module, np.ndarray]:
    return submodule(f.source, el.left_kernel(f.matrix))


def image(f: ModuleMap) -> tuple[Module, np.ndarray]:
    return submodule(f.target, el.row_space(f.matrix))


def cokernel(f: ModuleMap) -> tuple[Module, np.ndarray]:
    return quotient(f.target, el.row_space(f.matrix))


def direct_sum(mods: list[Module]) -> Module:
    a = mods[0].algebra
    n = sum(x.dim for x in mods)
    act = np.zeros((a.dim, n, n), dtype=np.int64)
    off = 0
    for x in mods:
        act[:, off:off + x.dim, off:off + x.dim] = x.act
        off += x.dim
    return Module(a, act)


def dual(m: Module) -> Module:
    """``Hom_k(m, k)`` as a right module over the opposite algebra."""
    return Module(m.algebra.opposite(), m.act.transpose(0, 2, 1))


def regular(a: Algebra) -> Module:
    return Module(a, a.mult.transpose(1, 0, 2))


def proj_module(a: Algebra, i: int) -> Module:
    """The indecomposable projective ``e_i A``."""
    idx = a.row_basis(i)
    return Module(a, a.mult[np.ix_(idx, range(a.dim), idx)].transpose(1, 0, 2))


def free_module(a: Algebra, terms) -> Module:
    terms = tuple(terms)
    if not terms:
        return zero_module(a)
    return direct_sum([_proj_cached(a, i) for i in terms])


def _proj_cached(a: Algebra, i: int) -> Module:
    cache = a.__dict__.setdefault("_proj_cache", {})
    if i not in cache:
        cache[i] = proj_module(a, i)
    return cache[i]


def indec_projectives(a: Algebra, side: str = "right") -> list[Module]:
    if side == "left":
        a = a.opposite()
    elif side != "right":
        raise ModuleError(f"unknown side {side!r}")
    return [proj_module(a, i) for i in range(a.nvert)]


def simple(a: Algebra, i: int) -> Module:
    act = np.zeros((a.dim, 1, 1), dtype=np.int64)
    act[a.idem[i], 0, 0] = 1
    return Module(a, act)


def based_matrix(a: Algebra, src_terms, tgt_terms, entries) -> np.ndarray:
    """k-linear matrix of the map ``⊕ e_{src}A -> ⊕ e_{tgt}A`` of a based matrix.

    ``entries[r, s]`` lies in ``e_{tgt_r} A e_{src_s}`` and acts by left
    multiplication.  Row convention: rows index the source basis.
    """
    src_terms, tgt_terms = tuple(src_terms), tuple(tgt_terms)
    src_idx = [a.row_basis(i) for i in src_terms]
    tgt_idx = [a.row_basis(i) for i in tgt_terms]
    ns = sum(len(x) for x in src_idx)
    nt = sum(len(x) for x in tgt_idx)
    out = el.zeros(ns, nt)
    if ns == 0 or nt == 0:
        return out
    # left multiplication matrices: lm[x][j, k] = coefficient of b_k in x b_j
    so = 0
    for s, si in enumerate(src_idx):
        to = 0
        for r, ti in enumerate(tgt_idx):
            x = entries[r, s]
            if x.any():
                lm = np.einsum("i,ijk->jk", x, a.mult) % el.prime()
                out[so:so + len(si), to:to + len(ti)] = lm[np.ix_(si, ti)]
            to += len(ti)
        so += len(si)
    return out


def hom_space(m: Module, n: Module) -> np.ndarray:
    """Basis of ``Hom_A(m, n)`` as an array of shape ``(k, dim m, dim n)``."""
    if m.algebra is not n.algebra:
        raise ModuleError("modules over different algebras")
    a = m.algebra
    unknowns = [(r, c) for r in range(m.dim) for c in range(n.dim) if m.vertex[r] == n.vertex[c]]
    if not unknowns:
        return np.zeros((0, m.dim, n.dim), dtype=np.int64)
    uk = np.array([u[0] for u in unknowns])
    ul = np.array([u[1] for u in unknowns])
    us = np.arange(len(unknowns))
    blocks = []
    p = el.prime()
    for b in a.generators[a.nvert:]:
        s, t = a.corner[b]
        rows_i = np.array(m.at(s), dtype=np.int64)
        cols_j = np.array(n.at(t), dtype=np.int64)
        if rows_i.size == 0 or cols_j.size == 0:
            continue
        am, bn = m.act[b], n.act[b]
        t3 = np.zeros((m.dim, n.dim, len(unknowns)), dtype=np.int64)
        t3[:, ul, us] = am[:, uk]
        t3[uk, :, us] = t3[uk, :, us] - bn[ul, :]
        blocks.append(t3[np.ix_(rows_i, cols_j)].reshape(-1, len(unknowns)) % p)
    if blocks:
        system = np.concatenate(blocks, axis=0)
        system = system[system.any(axis=1)]
    else:
        system = el.zeros(0, len(unknowns))
    ker = el.kernel_rows(system) if system.shape[0] else el.identity(len(unknowns))
    out = np.zeros((ker.shape[0], m.dim, n.dim), dtype=np.int64)
    out[:, uk, ul] = ker
    return out


def hom_basis(m: Module, n: Module) -> list[ModuleMap]:
    return [ModuleMap(m, n, f) for f in hom_space(m, n)]


def hom_dim(m: Module, n: Module) -> int:
    return hom_space(m, n).shape[0]


# ---------------------------------------------------------------- bimodules


class Bimodule:
    """``_D N _R`` with ``d . v = v @ left[d]`` and ``v . r = v @ right[r]``."""

    def __init__(self, left_algebra: Algebra, right_algebra: Algebra, left, right,
                 name: str = "", check: bool = False):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.left = np.asarray(left, dtype=np.int64) % el.prime()
        self.right = np.asarray(right, dtype=np.int64) % el.prime()
        self.dim = self.right.shape[1] if self.right.ndim == 3 else 0
        if self.dim == 0:
            self.left = np.zeros((left_algebra.dim, 0, 0), dtype=np.int64)
            self.right = np.zeros((right_algebra.dim, 0, 0), dtype=np.int64)
        self.name = name
        if check:
            self.validate()
        le = [self.left[e] for e in left_algebra.idem]
        re = [self.right[e] for e in right_algebra.idem]
        lv, rv = _vertices_of(le), _vertices_of(re)
        if lv is None or rv is None:
            projs = [(x @ y) % el.prime() for x in le for y in re]
            t = _adapting_basis(projs, self.dim)
            ti = el.inverse(t)
            self.left = np.einsum("ij,bjk,kl->bil", t, self.left, ti) % el.prime()
            self.right = np.einsum("ij,bjk,kl->bil", t, self.right, ti) % el.prime()
            lv = _vertices_of([self.left[e] for e in left_algebra.idem])
            rv = _vertices_of([self.right[e] for e in right_algebra.idem])
            self.rebased = t
        self.lvertex, self.rvertex = lv, rv

    def __repr__(self):
        return f"Bimodule(dim={self.dim})"

    def validate(self) -> None:
        p = el.prime()
        d, r = self.left_algebra, self.right_algebra
        if self.left.shape != (d.dim, self.dim, self.dim) or self.right.shape != (r.dim, self.dim, self.dim):
            raise ModuleError("bimodule action arrays have the wrong shape")
        lhs = np.einsum("inm,jmk->ijnk", self.right, self.right) % p
        rhs = np.einsum("ijl,lnk->ijnk", r.mult, self.right) % p
        if not np.array_equal(lhs, rhs):
            raise ModuleError("right action does not respect the multiplication")
        lhs = np.einsum("jnm,imk->ijnk", self.left, self.left) % p
        rhs = np.einsum("ijl,lnk->ijnk", d.mult, self.left) % p
        if not np.array_equal(lhs, rhs):
            raise ModuleError("left action does not respect the multiplication")
        eye = el.identity(self.dim)
        if not np.array_equal(np.einsum("b,bij->ij", d.unit, self.left) % p, eye) or \
                not np.array_equal(np.einsum("b,bij->ij", r.unit, self.right) % p, eye):
            raise ModuleError("units do not act as the identity")
        lr = np.einsum("anm,bmk->abnk", self.left, self.right) % p
        rl = np.einsum("bnm,amk->abnk", self.right, self.left) % p
        if not np.array_equal(lr, rl):
            raise ModuleError("left and right actions do not commute")

    def as_right(self) -> Module:
        return Module(self.right_algebra, self.right)

    def as_left(self) -> Module:
        """The left module, as a right module over the opposite algebra."""
        return Module(self.left_algebra.opposite(), self.left)

    def dual(self) -> "Bimodule":
        return Bimodule(self.right_algebra, self.left_algebra,
                        self.right.transpose(0, 2, 1), self.left.transpose(0, 2, 1))


def regular_bimodule(a: Algebra) -> Bimodule:
    left = a.mult  # left[x][j, k] = coefficient of b_k in x b_j
    right = a.mult.transpose(1, 0, 2)
    return Bimodule(a, a, left, right)


def restrict_bimodule(n: Bimodule, rows, left_algebra=None, left_index=None,
                      right_algebra=None, right_index=None) -> Bimodule:
    """Sub-bimodule on invariant ``rows`` with scalars restricted along index maps.

    ``left_index[c]`` is the basis element of ``n.left_algebra`` that the
    basis element ``c`` of the new left algebra maps to (and similarly on the
    right); this is how corner algebras act on ``eA`` and ``Ae``.
    """
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n.dim)
    r, piv, rk = el.rref(rows)
    r = r[:rk]
    la = left_algebra or n.left_algebra
    ra = right_algebra or n.right_algebra
    li = left_index if left_index is not None else list(range(la.dim))
    ri = right_index if right_index is not None else list(range(ra.dim))
    left = np.einsum("ij,bjk->bik", r, n.left[li])[:, :, piv] % el.prime()
    right = np.einsum("ij,bjk->bik", r, n.right[ri])[:, :, piv] % el.prime()
    return Bimodule(la, ra, left, right)


def quotient_bimodule(n: Bimodule, rows, left_algebra=None, left_index=None,
                      right_algebra=None, right_index=None) -> Bimodule:
    """Quotient by invariant ``rows``, optionally acting through lifts of a quotient algebra."""
    q, keep = el.quotient_projection(np.asarray(rows, dtype=np.int64).reshape(-1, n.dim), n.dim)
    la = left_algebra or n.left_algebra
    ra = right_algebra or n.right_algebra
    li = left_index if left_index is not None else list(range(la.dim))
    ri = right_index if right_index is not None else list(range(ra.dim))
    left = np.einsum("bij,jk->bik", n.left[li][:, keep, :], q) % el.prime()
    right = np.einsum("bij,jk->bik", n.right[ri][:, keep, :], q) % el.prime()
    out = Bimodule(la, ra, left, right)
    out.source_projection = q
    return out


def hom_into_regular(n: Bimodule) -> Bimodule:
    """``Hom_R(N_R, R_R)`` as an ``R``-``D`` bimodule for ``N = _D N _R``.

    Left ``R`` action ``(r f)(x) = r f(x)``, right ``D`` action ``(f d)(x) = f(d x)``.
    """
    r = n.right_algebra
    d = n.left_algebra
    basis = hom_space(n.as_right(), regular(r))
    k = basis.shape[0]
    flat = basis.reshape(k, -1)
    rr, piv, rk = el.rref(flat) if k else (flat, [], 0)
    coords_basis = rr[:rk]
    p = el.prime()

    def coords(mats):
        return np.asarray(mats).reshape(len(mats), -1)[:, piv] % p

    lm = r.mult  # lm[x][j, k]: left multiplication by x in row convention
    fb = coords_basis.reshape(rk, n.dim, r.dim)
    left = np.stack([coords([f @ lm[x] % p for f in fb]) for x in range(r.dim)])
    right = np.stack([coords([n.left[y] @ f % p for f in fb]) for y in range(d.dim)])
    out = Bimodule(r, d, left, right)
    if hasattr(out, "rebased"):
        raise ModuleError("Hom basis was not adapted")
    return out


def tensor_data(m: Module, n: Bimodule) -> tuple[Module, np.ndarray, np.ndarray]:
    """``m ⊗_A N`` for a right ``A``-module ``m`` and an ``A``-``D`` bimodule ``N``.

    Returns the module, the array ``pos`` with ``pos[i, j]`` the index of the
    pair ``(m_i, n_j)`` among surviving pairs (or -1), and the projection
    from pairs to the tensor basis.
    """
    a = m.algebra
    if n.left_algebra is not a:
        raise ModuleError("tensor over mismatched algebras")
    p = el.prime()
    d = n.right_algebra
    pos = -np.ones((m.dim, n.dim), dtype=np.int64)
    pairs = [(i, j) for i in range(m.dim) for j in range(n.dim) if m.vertex[i] == n.lvertex[j]]
    for t, (i, j) in enumerate(pairs):
        pos[i, j] = t
    npairs = len(pairs)
    rels = []
    for g in a.generators[a.nvert:]:
        s, t = a.corner[g]
        ms, mt = m.at(s), m.at(t)
        ns_, nt = [j for j in range(n.dim) if n.lvertex[j] == s], [j for j in range(n.dim) if n.lvertex[j] == t]
        if not ms or not nt:
            continue
        am, ln = m.act[g], n.left[g]
        for i in ms:
            block = np.zeros((len(nt), npairs), dtype=np.int64)
            jt = np.array(nt)
            if mt:
                kt = np.array(mt)
                cols = pos[np.ix_(kt, jt)].T  # (len nt, len mt)
                vals = np.broadcast_to(am[i, kt][None, :], cols.shape)
                np.add.at(block, (np.repeat(np.arange(len(nt)), len(mt)), cols.ravel()), vals.ravel())
            if ns_:
                ls = np.array(ns_)
                cols = np.broadcast_to(pos[i, ls][None, :], (len(nt), len(ls)))
                vals = ln[np.ix_(jt, ls)]
                np.add.at(block, (np.repeat(np.arange(len(nt)), len(ls)), cols.ravel()), -vals.ravel())
            rels.append(block % p)
    sub = np.concatenate(rels, axis=0) if rels else el.zeros(0, npairs)
    sub = sub[sub.any(axis=1)] if sub.shape[0] else sub
    q, keep = el.quotient_projection(el.row_space(sub) if sub.shape[0] else sub, npairs)
    pi = np.array([pairs[t][0] for t in range(npairs)], dtype=np.int64)
    pj = np.array([pairs[t][1] for t in range(npairs)], dtype=np.int64)
    kept_i, kept_j = pi[keep], pj[keep]
    act = np.zeros((d.dim, len(keep), len(keep)), dtype=np.int64)
    if keep:
        for x in range(d.dim):
            rx = n.right[x]
            # (m_i ⊗ n_j) x = sum_l rx[j, l] (m_i ⊗ n_l)
            img = np.zeros((len(keep), npairs), dtype=np.int64)
            for c, (i, j) in enumerate(zip(kept_i, kept_j)):
                ls = np.nonzero(rx[j])[0]
                if ls.size:
                    img[c, pos[i, ls]] = rx[j, ls]
            act[x] = (img @ q) % p
    out = Module(d, act)
    out.kept = [(int(i), int(j)) for i, j in zip(kept_i, kept_j)]
    return out, pos, q


def tensor_over(m: Module, n: Bimodule) -> Module:
    return tensor_data(m, n)[0]


def tensor_with_regular_check(m: Module) -> bool:
    """Spot identity ``m ⊗_A A ≅ m`` by dimension vector."""
    t = tensor_over(m, regular_bimodule(m.algebra))
    return np.array_equal(t.dimvec, m.dimvec)


# ---------------------------------------------------------------- resolutions


def projective_cover(m: Module) -> tuple[tuple, np.ndarray]:
    """Minimal projective cover ``⊕ e_i A -> m``; returns (terms, k-linear matrix)."""
    a = m.algebra
    gens = m.top_coords
    terms = tuple(m.vertex[g] for g in gens)
    blocks = []
    for g, i in zip(gens, terms):
        idx = a.row_basis(i)
        blocks.append(m.act[idx, g, :])
    mat = np.concatenate(blocks, axis=0) if blocks else el.zeros(0, m.dim)
    return terms, mat % el.prime()


def _generator_entries(a: Algebra, terms, vecs, vec_vertices) -> np.ndarray:
    """Based matrix of a map ``⊕ e_r A -> ⊕ e_{terms} A`` sending ``e_r`` to each vector."""
    offsets = np.cumsum([0] + [len(a.row_basis(i)) for i in terms])
    out = np.zeros((len(terms), len(vecs), a.dim), dtype=np.int64)
    for t, v in enumerate(vecs):
        for s, i in enumerate(terms):
            out[s, t, a.row_basis(i)] = v[offsets[s]:offsets[s + 1]]
    return out


@dataclass
class Resolution:
    """Minimal projective resolution ``... -> P_1 -> P_0 -> m``.

    ``terms[k]`` lists the vertices of ``P_k``; ``diffs[k]`` is the based
    matrix of ``P_{k+1} -> P_k`` (shape ``len P_k x len P_{k+1} x dim A``).
    ``cover`` is the k-linear matrix of ``P_0 -> m``.
    """

    module: Module
    terms: list
    diffs: list
    cover: np.ndarray
    finite: bool
    syzygies: list

    @property
    def length(self) -> int:
        return len(self.terms) - 1 if self.finite else -1


def min_proj_resolution(m: Module, cap: int = 24) -> Resolution:
    a = m.algebra
    terms0, cov = projective_cover(m)
    terms, diffs, syz = [terms0], [], [m]
    cur_terms, cur_map = terms0, cov
    finite = False
    while True:
        if not cur_terms:
            finite = True
            terms.pop()
            break
        if len(terms) > cap:
            break
        src = free_module(a, cur_terms)
        k_mod, k_rows = submodule(src, el.left_kernel(cur_map))
        syz.append(k_mod)
        if k_mod.dim == 0:
            finite = True
            break
        nt, ncov = projective_cover(k_mod)
        # generators of the kernel in coordinates of src
        gens = (ncov @ k_rows) % el.prime()
        starts = np.cumsum([0] + [len(a.row_basis(i)) for i in nt])
        vecs = [gens[starts[t] + a.row_basis(nt[t]).index(a.idem[nt[t]])] for t in range(len(nt))]
        diffs.append(_generator_entries(a, cur_terms, vecs, nt))
        terms.append(nt)
        cur_terms, cur_map = nt, gens
    return Resolution(m, terms, diffs, cov, finite, syz)


def is_projective(m: Module) -> bool:
    terms, cov = projective_cover(m)
    return cov.shape[0] == m.dim


as_projective_check = is_projective


def proj_dim(m: Module, cap: int = 24) -> int | None:
    r = min_proj_resolution(m, cap)
    return r.length if r.finite else None


def syzygy(m: Module) -> Module:
    terms, cov = projective_cover(m)
    src = free_module(m.algebra, terms)
    return submodule(src, el.left_kernel(cov))[0]


def _hom_free_into(a: Algebra, terms, n: Module) -> list[int]:
    # Hom(⊕ e_i A, n) = ⊕ n e_i, coordinates listed per term
    return [n.at(i) for i in terms]


def hom_complex_matrix(a: Algebra, src_terms, tgt_terms, entries, n: Module) -> np.ndarray:
    """Matrix of ``Hom(⊕ e_tgt A, n) -> Hom(⊕ e_src A, n)`` induced by a based map.

    Row convention: rows index ``⊕ n e_tgt``, columns ``⊕ n e_src``.  A
    homomorphism is given by the images ``y_r`` of the generators; precomposing
    with left multiplication by ``entries[r, s]`` sends it to ``sum_r y_r entries[r, s]``.
    """
    ti = _hom_free_into(a, tgt_terms, n)
    si = _hom_free_into(a, src_terms, n)
    nr, nc = sum(map(len, ti)), sum(map(len, si))
    out = el.zeros(nr, nc)
    ro = 0
    for r, rows in enumerate(ti):
        co = 0
        for s, cols in enumerate(si):
            x = entries[r, s]
            if x.any() and rows and cols:
                act = np.einsum("b,bij->ij", x, n.act) % el.prime()
                out[ro:ro + len(rows), co:co + len(cols)] = act[np.ix_(rows, cols)]
            co += len(cols)
        ro += len(rows)
    return out


def ext_dim(m: Module, n: Module, i: int, res: Resolution | None = None, cap: int = 24) -> int:
    if i < 0:
        raise ValueError("negative Ext degree")
    res = res or min_proj_resolution(m, max(cap, i + 2))
    if not res.finite and len(res.terms) <= i + 1:
        raise ResolutionCapExceeded(f"resolution cap reached before degree {i}")
    a = m.algebra
    if i >= len(res.terms):
        return 0
    ti = res.terms[i]
    dim_i = sum(len(n.at(v)) for v in ti)
    if i + 1 < len(res.terms):
        out = hom_complex_matrix(a, res.terms[i + 1], ti, res.diffs[i], n)
        ker = dim_i - el.rank(out)
    else:
        ker = dim_i
    if i == 0:
        # Hom(m, n): kernel of Hom(P_0, n) -> Hom(P_1, n)
        return ker
    inc = hom_complex_matrix(a, ti, res.terms[i - 1], res.diffs[i - 1], n)
    return ker - el.rank(inc)


def gorenstein_check(a: Algebra, cap: int = 24) -> tuple[int, int] | None:
    """``(inj.dim A_A, inj.dim _A A)``, or ``None`` when a cap is exceeded."""
    right = proj_dim(dual(regular(a)), cap)
    left = proj_dim(dual(regular(a.opposite())), cap)
    if right is None or left is None:
        return None
    return right, left


def star_based(a: Algebra, entries) -> np.ndarray:
    """Transpose of a based matrix, read over the opposite algebra."""
    return entries.transpose(1, 0, 2).copy()


def based_cokernel(a: Algebra, src_terms, tgt_terms, entries) -> Module:
    tgt = free_module(a, tgt_terms)
    mat = based_matrix(a, src_terms, tgt_terms, entries)
    return quotient(tgt, el.row_space(mat) if mat.shape[0] else mat)[0]


def transpose_module(m: Module) -> Module:
    """Auslander-Bridger transpose ``Tr m`` over the opposite algebra."""
    a = m.algebra
    res = min_proj_resolution(m, cap=1)
    op = a.opposite()
    p0 = res.terms[0] if res.terms else ()
    if len(res.terms) < 2:
        p1, d = (), np.zeros((len(p0), 0, a.dim), dtype=np.int64)
    else:
        p1, d = res.terms[1], res.diffs[0]
    return based_cokernel(op, p0, p1, star_based(a, d))


def ar_translate(m: Module) -> Module:
    if m.dim == 0:
        return m
    return dual(transpose_module(m))


# ---------------------------------------------------------------- iso tests


def fingerprint(m: Module) -> tuple:
    layers = []
    cur = m
    while cur.dim:
        layers.append(tuple(cur.topvec.tolist()))
        cur = submodule(cur, cur.radical_rows)[0]
    soc = m.socle_rows
    svec = [0] * m.algebra.nvert
    # socle is invariant under idempotents, so its reduced rows are homogeneous
    for row in soc:
        nz = np.nonzero(row)[0]
        svec[m.vertex[nz[0]]] += 1
    return (m.dim, tuple(m.dimvec.tolist()), tuple(layers), tuple(svec))


def module_iso_test(m: Module, n: Module, attempts: int = 64, seed: int = 0) -> str:
    if fingerprint(m) != fingerprint(n):
        return "noniso"
    if m.dim == 0:
        return "iso"
    basis = hom_space(m, n)
    if basis.shape[0] == 0:
        return "noniso"
    rng = np.random.default_rng(seed)
    p = el.prime()
    for _ in range(attempts):
        c = rng.integers(0, p, size=basis.shape[0])
        f = np.einsum("k,kij->ij", c, basis) % p
        if el.is_invertible(f):
            return "iso"
    return "undetermined"


def projective_multiplicity(m: Module, i: int) -> tuple[int, np.ndarray, np.ndarray]:
    """Multiplicity of ``e_i A`` as a direct summand of ``m`` with witnessing data."""
    a = m.algebra
    rows = m.at(i)
    if not rows:
        return 0, el.zeros(0, m.dim), el.zeros(0, 0)
    pi = _proj_cached(a, i)
    back = hom_space(m, pi)
    if back.shape[0] == 0:
        return 0, el.zeros(0, m.dim), el.zeros(0, 0)
    top = pi.algebra.row_basis(i).index(a.idem[i])
    # pairing[v, t] = coefficient of e_i in g_t(v)
    pair = back[:, rows, top].T % el.prime()
    return el.rank(pair), el.identity(m.dim)[rows], pair


def strip_projectives(m: Module) -> Module:
    """A module ``m'`` with ``m ≅ m' ⊕ P`` and no projective summands in ``m'``."""
    for i in range(m.algebra.nvert):
        r, vecs, pair = projective_multiplicity(m, i)
        if r == 0:
            continue
        _, piv, _ = el.rref(pair.T)
        chosen = vecs[piv]
        summand = generated(m, chosen)
        return strip_projectives(quotient(m, summand)[0])
    return m


def tensor_bimodules(p: Bimodule, q: Bimodule) -> tuple[Bimodule, np.ndarray, np.ndarray]:
    """``P ⊗_C Q`` for ``_A P _C`` and ``_C Q _D``, with pair positions and projection."""
    mod, pos, proj = tensor_data(p.as_right(), q)
    prime = el.prime()
    kept = mod.kept
    a = p.left_algebra
    left = np.zeros((a.dim, mod.dim, mod.dim), dtype=np.int64)
    for x in range(a.dim):
        lx = p.left[x]
        if not lx.any():
            continue
        img = np.zeros((mod.dim, proj.shape[0]), dtype=np.int64)
        for c, (i, j) in enumerate(kept):
            ls = np.nonzero(lx[i])[0]
            for l_ in ls:
                t = pos[l_, j]
                if t >= 0:
                    img[c, t] = (img[c, t] + lx[i, l_]) % prime
        left[x] = (img @ proj) % prime
    out = Bimodule(a, q.right_algebra, left, mod.act)
    out.kept = kept
    if hasattr(out, "rebased"):
        raise ModuleError("tensor basis was not adapted")
    return out, pos, proj


def bimodule_map_check(n: Bimodule, n2: Bimodule, g: np.ndarray) -> bool:
    p = el.prime()
    for x in range(n.left_algebra.dim):
        if not np.array_equal(n.left[x] @ g % p, g @ n2.left[x] % p):
            return False
    for y in range(n.right_algebra.dim):
        if not np.array_equal(n.right[y] @ g % p, g @ n2.right[y] % p):
            return False
    return True


# ---------------------------------------------------------------- triangular modules


@dataclass
class TriModule:
    """A module ``(X_B, Y_C)_phi`` over ``A = [[B, 0], [M, C]]``.

    ``phi`` is the matrix of ``Y ⊗_C M -> X`` in the basis of
    ``tensor_over(y, tri.m)``.
    """

    tri: object
    x: Module
    y: Module
    phi: np.ndarray

    @cached_property
    def tensor(self) -> tuple[Module, np.ndarray, np.ndarray]:
        return tensor_data(self.y, self.tri.m)

    def validate(self) -> None:
        t = self.tensor[0]
        if self.phi.shape != (t.dim, self.x.dim):
            raise ModuleError("phi has the wrong shape")
        p = el.prime()
        for j in range(self.tri.b.dim):
            if not np.array_equal((t.act[j] @ self.phi) % p, (self.phi @ self.x.act[j]) % p):
                raise ModuleError("phi is not a map of right B-modules")


def _check_tri_algebra(m: Module, tri) -> None:
    if m.algebra is not tri.a:
        raise ModuleError("module is not over the triangular algebra")


def tri_unpack(m: Module, tri) -> TriModule:
    """Read ``X = m(1-e)``, ``Y = me`` and ``phi`` off an ``A``-module."""
    _check_tri_algebra(m, tri)
    bset = set(tri.b_verts)
    xr = [r for r in range(m.dim) if m.vertex[r] in bset]
    yr = [r for r in range(m.dim) if m.vertex[r] not in bset]
    x = Module(tri.b, np.stack([m.act[i][np.ix_(xr, xr)] for i in tri.b_idx]))
    y = Module(tri.c, np.stack([m.act[i][np.ix_(yr, yr)] for i in tri.c_idx]))
    tdata = tensor_data(y, tri.m)
    tm = tdata[0]
    phi = el.zeros(tm.dim, len(xr))
    for row, (i, k) in enumerate(tm.kept):
        phi[row] = m.act[tri.m_idx[k]][yr[i], xr]
    out = TriModule(tri, x, y, phi)
    out.__dict__["tensor"] = tdata
    return out


def tri_pack(t: TriModule, check: bool = False) -> Module:
    """The ``A``-module on ``X ⊕ Y`` with ``M`` acting through ``phi``."""
    tri = t.tri
    a = tri.a
    nx, ny = t.x.dim, t.y.dim
    act = np.zeros((a.dim, nx + ny, nx + ny), dtype=np.int64)
    for j, i in enumerate(tri.b_idx):
        act[i, :nx, :nx] = t.x.act[j]
    for j, i in enumerate(tri.c_idx):
        act[i, nx:, nx:] = t.y.act[j]
    _, pos, q = t.tensor
    p = el.prime()
    for k, i in enumerate(tri.m_idx):
        for r in range(ny):
            c = pos[r, k]
            if c >= 0:
                act[i, nx + r, :nx] = (q[c] @ t.phi) % p
    return Module(a, act, check=check)
