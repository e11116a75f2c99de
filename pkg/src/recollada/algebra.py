"""Finite-dimensional algebras by structure constants, and quiver presentations.

Conventions used throughout the package:

* ``mult[i, j, k]`` is the coefficient of basis element ``k`` in ``b_i * b_j``.
* The basis is *adapted*: every basis element ``b`` satisfies ``e_r b e_s = b``
  for one pair of vertices ``(r, s)``, and the idempotents are themselves
  basis elements.  All constructions here preserve this.
* Non-idempotent basis elements are radical (the algebra is split basic
  with the radical spanned by those elements); ``Algebra`` checks this.
* A path in a quiver is stored in traversal order.  Relations and labels
  use the written (composition) order, so the written word ``a*b`` means
  "traverse ``b``, then ``a``".  Multiplication of paths is concatenation
  in traversal order, which makes right modules the representations of the
  quiver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import exactlin as el


class AlgebraError(ValueError):
    pass


class IllFormedRelation(AlgebraError):
    pass


class DimensionCapExceeded(AlgebraError):
    pass


class Algebra:
    def __init__(self, mult, idempotents, labels=None, vertex_labels=None,
                 name: str = "", words=None, check: bool = True):
        self.mult = np.asarray(mult, dtype=np.int64) % el.prime()
        self.dim = self.mult.shape[0] if self.mult.ndim == 3 else 0
        if self.dim == 0:
            self.mult = np.zeros((0, 0, 0), dtype=np.int64)
        self.idem = [int(i) for i in idempotents]
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.dim)]
        self.vertex_labels = (list(vertex_labels) if vertex_labels is not None
                              else [str(v) for v in range(len(self.idem))])
        self.name = name
        # traversal-order arrow words, only for algebras presented by a quiver
        self.words = words
        self._op = None
        self.corner = self._corners()
        if check:
            self.validate()

    def __repr__(self):
        return f"Algebra({self.name or 'anonymous'}, dim={self.dim}, vertices={len(self.idem)})"

    @property
    def nvert(self) -> int:
        return len(self.idem)

    @cached_property
    def unit(self) -> np.ndarray:
        u = np.zeros(self.dim, dtype=np.int64)
        u[self.idem] = 1
        return u

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mult) % el.prime()

    def _corners(self):
        out = []
        if self.dim == 0:
            return out
        # b = e_r b e_s with e_r b taken from mult[e_r, b]
        for b in range(self.dim):
            rows = [r for r, e in enumerate(self.idem) if self.mult[e, b, b] == 1]
            cols = [s for s, e in enumerate(self.idem) if self.mult[b, e, b] == 1]
            if len(rows) != 1 or len(cols) != 1:
                raise AlgebraError(f"basis element {self.labels[b]} is not in a single idempotent corner")
            out.append((rows[0], cols[0]))
        return out

    def validate(self) -> None:
        p = el.prime()
        d = self.dim
        if d == 0:
            return
        m = self.mult
        lhs = np.einsum("ijm,mkl->ijkl", m, m) % p
        rhs = np.einsum("jkm,iml->ijkl", m, m) % p
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(lhs != rhs)[0]
            raise AlgebraError("multiplication is not associative on basis triple "
                               f"({', '.join(self.labels[t] for t in bad[:3])})")
        u = self.unit
        left = np.einsum("i,ijk->jk", u, m) % p
        right = np.einsum("j,ijk->ik", u, m) % p
        eye = np.eye(d, dtype=np.int64)
        if not (np.array_equal(left, eye) and np.array_equal(right, eye)):
            raise AlgebraError("the sum of the idempotents is not a two-sided unit")
        for a, ea in enumerate(self.idem):
            for b, eb in enumerate(self.idem):
                prod = m[ea, eb]
                expect = self.basis_vector(ea) if a == b else np.zeros(d, dtype=np.int64)
                if not np.array_equal(prod, expect):
                    raise AlgebraError("idempotents are not orthogonal")
        for b in self.radical_basis:
            r, s = self.corner[b]
            if r == s and not self._nilpotent(b):
                raise AlgebraError(f"basis element {self.labels[b]} is not nilpotent; "
                                   "only split basic algebras with radical bases are supported")

    def _nilpotent(self, b: int) -> bool:
        x = self.basis_vector(b)
        for _ in range(self.dim + 1):
            x = self.mul(x, self.basis_vector(b)) if x.any() else x
            if not x.any():
                return True
        return False

    @cached_property
    def radical_basis(self) -> list[int]:
        s = set(self.idem)
        return [b for b in range(self.dim) if b not in s]

    def corner_basis(self, r: int, s: int) -> list[int]:
        """Basis indices spanning ``e_r A e_s``."""
        return [b for b in range(self.dim) if self.corner[b] == (r, s)]

    def row_basis(self, r: int) -> list[int]:
        """Basis indices spanning the projective ``e_r A``."""
        return [b for b in range(self.dim) if self.corner[b][0] == r]

    def col_basis(self, s: int) -> list[int]:
        return [b for b in range(self.dim) if self.corner[b][1] == s]

    @cached_property
    def generators(self) -> list[int]:
        """Idempotents plus radical basis elements spanning rad / rad^2."""
        rad = self.radical_basis
        if not rad:
            return list(self.idem)
        sq = np.zeros((0, self.dim), dtype=np.int64)
        prods = [self.mult[a, b] for a in rad for b in rad]
        if prods:
            sq = el.row_space(np.array(prods))
        taken = []
        current = sq
        for b in rad:
            v = self.basis_vector(b)[None, :]
            trial = np.vstack([current, v]) if current.shape[0] else v
            if el.rank(trial) > current.shape[0]:
                taken.append(b)
                current = el.row_space(trial)
        return list(self.idem) + taken

    @cached_property
    def cartan(self) -> np.ndarray:
        """``cartan[r, s] = dim e_r A e_s``."""
        n = self.nvert
        c = np.zeros((n, n), dtype=np.int64)
        for r, s in self.corner:
            c[r, s] += 1
        return c

    def opposite(self) -> "Algebra":
        if self._op is None:
            op = Algebra(self.mult.transpose(1, 0, 2), self.idem, self.labels,
                         self.vertex_labels, name=f"{self.name}^op", check=False)
            op._op = self
            self._op = op
        return self._op

    def is_local_unit(self, x, vertex: int) -> bool:
        """Whether ``x`` in ``e_v A e_v`` is invertible there (nonzero idempotent coefficient)."""
        return int(x[self.idem[vertex]]) % el.prime() != 0

    def corner_inverse(self, x, vertex: int) -> np.ndarray:
        """Inverse of a unit of the local corner ``e_v A e_v``."""
        idx = self.corner_basis(vertex, vertex)
        # left multiplication by x restricted to the corner, row convention
        lm = np.einsum("i,ijk->jk", x, self.mult)[np.ix_(idx, idx)] % el.prime()
        target = self.basis_vector(self.idem[vertex])[idx]
        sol = el.solve_rows(lm, target)
        if sol is None:
            raise ZeroDivisionError("not a unit of the corner")
        out = np.zeros(self.dim, dtype=np.int64)
        out[idx] = sol[0]
        return out

    def same_structure(self, other: "Algebra") -> bool:
        return (self.dim == other.dim and np.array_equal(self.mult, other.mult)
                and self.idem == other.idem)


def field_algebra(name: str = "k") -> Algebra:
    return Algebra(np.ones((1, 1, 1), dtype=np.int64), [0], ["e"], ["1"], name=name)


def product_algebra(a: Algebra, b: Algebra, name: str = "") -> Algebra:
    d = a.dim + b.dim
    m = np.zeros((d, d, d), dtype=np.int64)
    m[: a.dim, : a.dim, : a.dim] = a.mult
    m[a.dim:, a.dim:, a.dim:] = b.mult
    idem = list(a.idem) + [a.dim + i for i in b.idem]
    labels = [f"{a.name}:{x}" for x in a.labels] + [f"{b.name}:{x}" for x in b.labels]
    vl = [f"{a.name}:{x}" for x in a.vertex_labels] + [f"{b.name}:{x}" for x in b.vertex_labels]
    return Algebra(m, idem, labels, vl, name=name or f"{a.name}x{b.name}")


@dataclass(frozen=True)
class Idempotent:
    """Sum of the primitive idempotents at a set of vertices."""

    owner: Algebra
    vertices: frozenset = field(default_factory=frozenset)

    @property
    def vector(self) -> np.ndarray:
        v = np.zeros(self.owner.dim, dtype=np.int64)
        for i in self.vertices:
            v[self.owner.idem[i]] = 1
        return v

    def complement(self) -> "Idempotent":
        return Idempotent(self.owner, frozenset(range(self.owner.nvert)) - self.vertices)


def corner(a: Algebra, e: Idempotent) -> Algebra:
    """The algebra ``eAe``; ``parent_index`` maps its basis into ``a``."""
    verts = sorted(e.vertices)
    keep = [b for b in range(a.dim) if a.corner[b][0] in e.vertices and a.corner[b][1] in e.vertices]
    m = a.mult[np.ix_(keep, keep, keep)] if keep else np.zeros((0, 0, 0), dtype=np.int64)
    pos = {b: i for i, b in enumerate(keep)}
    out = Algebra(m, [pos[a.idem[v]] for v in verts], [a.labels[b] for b in keep],
                  [a.vertex_labels[v] for v in verts], name=f"{a.name}[corner]", check=False)
    out.parent_index = keep
    out.parent_vertices = verts
    if a.words is not None:
        out.words = [a.words[b] for b in keep]
    return out


def ideal_span(a: Algebra, e: Idempotent) -> np.ndarray:
    """Reduced basis of the two-sided ideal ``AeA``."""
    hits = [b for b in range(a.dim) if a.corner[b][1] in e.vertices]
    if not hits:
        return np.zeros((0, a.dim), dtype=np.int64)
    rows = np.concatenate([a.mult[b] for b in hits], axis=0)
    return el.row_space(rows)


def quotient_corner(a: Algebra, e: Idempotent) -> Algebra:
    """The algebra ``A/AeA``; ``parent_index`` lists the basis elements kept."""
    sub = ideal_span(a, e)
    q, keep = el.quotient_projection(sub, a.dim)
    verts = [v for v in range(a.nvert) if v not in e.vertices]
    if keep:
        m = np.einsum("ijk,kl->ijl", a.mult[np.ix_(keep, keep, range(a.dim))], q) % el.prime()
    else:
        m = np.zeros((0, 0, 0), dtype=np.int64)
    pos = {b: i for i, b in enumerate(keep)}
    out = Algebra(m, [pos[a.idem[v]] for v in verts], [a.labels[b] for b in keep],
                  [a.vertex_labels[v] for v in verts], name=f"{a.name}/AeA")
    out.parent_index = keep
    out.parent_vertices = verts
    out.projection = q
    if a.words is not None:
        out.words = [a.words[b] for b in keep]
    return out


@dataclass
class QuiverPresentation:
    vertices: list
    arrows: list  # (label, source, target)
    relations: list  # each: list of (coeff, [arrow labels in written order])
    p: int | None = None
    name: str = ""

    def arrow_map(self):
        return {lab: (src, tgt) for lab, src, tgt in self.arrows}


def _check_relations(q: QuiverPresentation):
    arrows = q.arrow_map()
    if len(arrows) != len(q.arrows):
        raise IllFormedRelation("duplicate arrow labels")
    verts = set(q.vertices)
    for lab, (s, t) in arrows.items():
        if s not in verts or t not in verts:
            raise IllFormedRelation(f"arrow {lab} uses an unknown vertex")
    out = []
    for k, rel in enumerate(q.relations):
        ends = None
        terms = {}
        for coeff, written in rel:
            if not written:
                raise IllFormedRelation(f"relation {k}: trivial paths are not allowed in relations")
            trav = tuple(reversed(list(written)))
            for lab in trav:
                if lab not in arrows:
                    raise IllFormedRelation(f"relation {k}: unknown arrow {lab!r}")
            for x, y in zip(trav, trav[1:]):
                if arrows[x][1] != arrows[y][0]:
                    raise IllFormedRelation(f"relation {k}: path {'*'.join(written)} is not composable")
            st = (arrows[trav[0]][0], arrows[trav[-1]][1])
            if ends is None:
                ends = st
            elif ends != st:
                raise IllFormedRelation(f"relation {k}: terms do not share source and target")
            terms[trav] = (terms.get(trav, 0) + int(coeff)) % el.prime()
        terms = {w: c for w, c in terms.items() if c}
        if terms:
            out.append(terms)
    return out


def algebra_from_quiver(q: QuiverPresentation, dim_cap: int = 512) -> Algebra:
    """Path algebra modulo relations, with a rewriting normal form basis."""
    p = el.prime()
    rels = _check_relations(q)
    order = {lab: i for i, (lab, _, _) in enumerate(q.arrows)}
    arrows = q.arrow_map()

    def key(w):
        return (len(w), [order[x] for x in w])

    rules = {}
    for terms in rels:
        lead = max(terms, key=key)
        c = el.inv_scalar(terms[lead])
        rules[lead] = {w: (-c * v) % p for w, v in terms.items() if w != lead}
    leads = list(rules)

    def find(w):
        for i in range(len(w)):
            for lw in leads:
                if w[i:i + len(lw)] == lw:
                    return i, lw
        return None

    cache = {}

    def reduce(w):
        if w in cache:
            return cache[w]
        hit = find(w)
        if hit is None:
            res = {w: 1}
        else:
            i, lw = hit
            res = {}
            for tail, c in rules[lw].items():
                for nw, c2 in reduce(w[:i] + tail + w[i + len(lw):]).items():
                    res[nw] = (res.get(nw, 0) + c * c2) % p
            res = {x: v for x, v in res.items() if v}
        cache[w] = res
        return res

    vindex = {v: i for i, v in enumerate(q.vertices)}
    # basis: (start vertex, traversal word)
    basis = [(v, ()) for v in q.vertices]
    frontier = [(v, ()) for v in q.vertices]
    length = 0
    while frontier:
        length += 1
        nxt = []
        for start, w in frontier:
            end = arrows[w[-1]][1] if w else start
            for lab, src, tgt in q.arrows:
                if src != end:
                    continue
                nw = w + (lab,)
                if all(nw[-len(lw):] != lw for lw in leads if len(lw) <= len(nw)):
                    nxt.append((start, nw))
        basis.extend(nxt)
        frontier = nxt
        if len(basis) > dim_cap or (frontier and length > dim_cap):
            raise DimensionCapExceeded(
                f"more than {dim_cap} normal-form paths; relations may not be admissible")
    pos = {b: i for i, b in enumerate(basis)}
    d = len(basis)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for i, (s1, w1) in enumerate(basis):
        end1 = arrows[w1[-1]][1] if w1 else s1
        for j, (s2, w2) in enumerate(basis):
            if end1 != s2:
                continue
            for nw, c in reduce(w1 + w2).items():
                mult[i, j, pos[(s1, nw)]] = c
    labels = []
    for s, w in basis:
        labels.append(f"e_{s}" if not w else "*".join(reversed(w)))
    alg = Algebra(mult, list(range(len(q.vertices))), labels, [str(v) for v in q.vertices],
                  name=q.name or "quiver", words=[w for _, w in basis])
    alg.arrow_labels = [lab for lab, _, _ in q.arrows]
    alg.vertex_index = vindex
    return alg


def opposite(a: Algebra) -> Algebra:
    return a.opposite()


# ------------------------------------------------------------ triangular data


@dataclass
class Triangular:
    """``A = [[B, 0], [M, C]]`` with ``e`` the unit of ``C``.

    ``b_idx``, ``m_idx`` and ``c_idx`` give the positions in ``a`` of the
    bases of ``B``, ``M = eA(1-e)`` and ``C``; ``b_verts`` and ``c_verts``
    the vertices of ``a`` belonging to ``B`` and ``C``.  ``m`` is the
    ``C``-``B`` bimodule.
    """

    a: Algebra
    e: Idempotent
    b: Algebra
    c: Algebra
    m: object
    b_idx: list
    m_idx: list
    c_idx: list
    b_verts: list
    c_verts: list

    def stratifying_witness(self) -> bool:
        """``AeA = eA``, hence ``AeA`` is a projective right ``A``-module."""
        a = self.a
        ideal = ideal_span(a, self.e)
        rows = sorted(set(self.m_idx) | set(self.c_idx))
        ea = np.zeros((len(rows), a.dim), dtype=np.int64)
        ea[np.arange(len(rows)), rows] = 1
        return ideal.shape[0] == len(rows) and el.rank(np.vstack([ideal, ea])) == len(rows)


def split_triangular(a: Algebra, vertices) -> Triangular:
    """Read an algebra with ``(1-e) A e = 0`` as a triangular matrix algebra."""
    from .modcat import Bimodule

    e = Idempotent(a, frozenset(vertices))
    cv = sorted(e.vertices)
    bv = [v for v in range(a.nvert) if v not in e.vertices]
    for b in range(a.dim):
        r, s = a.corner[b]
        if r in bv and s in e.vertices:
            raise AlgebraError("(1-e)Ae is nonzero; the algebra is not lower triangular for this e")
    bal = corner(a, e.complement())
    cal = corner(a, e)
    m_idx = [b for b in range(a.dim) if a.corner[b][0] in e.vertices and a.corner[b][1] in bv]
    mm = a.mult
    p = el.prime()
    left = np.stack([mm[np.ix_([x], m_idx, m_idx)][0] for x in cal.parent_index]) if m_idx else \
        np.zeros((cal.dim, 0, 0), dtype=np.int64)
    right = np.stack([mm[np.ix_(m_idx, [y], m_idx)][:, 0, :] for y in bal.parent_index]) if m_idx else \
        np.zeros((bal.dim, 0, 0), dtype=np.int64)
    mb = Bimodule(cal, bal, left % p, right % p)
    return Triangular(a, e, bal, cal, mb, list(bal.parent_index), m_idx, list(cal.parent_index), bv, cv)


def triangular(b: Algebra, c: Algebra, m) -> tuple[Algebra, Idempotent]:
    """Assemble ``[[B, 0], [M, C]]`` from a ``C``-``B`` bimodule ``M``."""
    if m.left_algebra is not c or m.right_algebra is not b:
        raise AlgebraError("bimodule must have left algebra C and right algebra B")
    m.validate()
    nb, nm, nc = b.dim, m.dim, c.dim
    d = nb + nm + nc
    mult = np.zeros((d, d, d), dtype=np.int64)
    mult[:nb, :nb, :nb] = b.mult
    mo, co = nb, nb + nm
    if nm:
        # mu_j . b = sum_k right[b][j, k] mu_k ; c . mu_j = sum_k left[c][j, k] mu_k
        mult[mo:co, :nb, mo:co] = m.right.transpose(1, 0, 2)
        mult[co:, mo:co, mo:co] = m.left
    mult[co:, co:, co:] = c.mult
    idem = list(b.idem) + [co + i for i in c.idem]
    bl, cl = list(b.labels), list(c.labels)
    clash = set(bl) & set(cl)
    if clash:
        bl = [f"B:{x}" for x in bl]
        cl = [f"C:{x}" for x in cl]
    labels = bl + [f"m{j}" for j in range(nm)] + cl
    bvl, cvl = list(b.vertex_labels), list(c.vertex_labels)
    if set(bvl) & set(cvl):
        bvl = [f"B:{x}" for x in bvl]
        cvl = [f"C:{x}" for x in cvl]
    a = Algebra(mult % el.prime(), idem, labels, bvl + cvl,
                name=f"[[{b.name},0],[M,{c.name}]]")
    e = Idempotent(a, frozenset(range(b.nvert, b.nvert + c.nvert)))
    return a, e
