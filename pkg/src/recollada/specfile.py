"""Reading algebra spec files (JSON).

Quiver form::

    {"name": "...", "field": 101,
     "quiver": {"vertices": [...], "arrows": [[label, src, tgt], ...],
                "relations": [[[coeff, [arrow labels...]], ...], ...]},
     "e": [vertex labels]}

``e`` is optional and selects the idempotent of a triangular split.  The
triangular form replaces ``quiver`` by::

    "triangular": {"B": <quiver spec>, "C": <quiver spec>,
                   "M": {"dim": n, "left": {C-generator: matrix},
                         "right": {B-generator: matrix}}}

Generators are vertex or arrow labels; matrices act on row vectors, so the
right action is ``m.b = m @ right[b]`` and the left action ``c.m = m @ left[c]``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import exactlin as el
from .algebra import (Algebra, AlgebraError, QuiverPresentation, Triangular, algebra_from_quiver,
                      split_triangular, triangular)


class SpecError(ValueError):
    pass


@dataclass
class LoadedSpec:
    name: str
    algebra: Algebra
    tri: Triangular | None
    data: dict


def parse_json(text: str, source: str = "<spec>") -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SpecError(f"{source}:1:1: top level must be an object")
    return data


def _need(d: dict, key: str, kind, where: str):
    if key not in d:
        raise SpecError(f"{where}: missing key '{key}'")
    v = d[key]
    if not isinstance(v, kind):
        raise SpecError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return v


def _set_field(d: dict, where: str) -> None:
    if "field" not in d:
        return
    p = d["field"]
    if not isinstance(p, int) or isinstance(p, bool):
        raise SpecError(f"{where}.field: expected an integer prime")
    if p != el.prime():
        try:
            el.set_prime(p)
        except ValueError as exc:
            raise SpecError(f"{where}.field: {exc}") from None


def quiver_from_data(q: dict, where: str, name: str = "") -> QuiverPresentation:
    verts = _need(q, "vertices", list, where)
    arrows = _need(q, "arrows", list, where)
    rels = q.get("relations", [])
    if not isinstance(rels, list):
        raise SpecError(f"{where}.relations: expected list")
    verts = [str(v) for v in verts]
    arr = []
    for k, a in enumerate(arrows):
        if not (isinstance(a, list) and len(a) == 3):
            raise SpecError(f"{where}.arrows[{k}]: expected [label, source, target]")
        arr.append(tuple(str(x) for x in a))
    out = []
    for k, r in enumerate(rels):
        if not isinstance(r, list) or not r:
            raise SpecError(f"{where}.relations[{k}]: expected a nonempty list of [coeff, word] terms")
        terms = []
        for t, term in enumerate(r):
            ok = (isinstance(term, list) and len(term) == 2 and isinstance(term[0], int)
                  and isinstance(term[1], list))
            if not ok:
                raise SpecError(f"{where}.relations[{k}][{t}]: expected [coeff, [arrow labels]]")
            terms.append((term[0], [str(x) for x in term[1]]))
        out.append(terms)
    return QuiverPresentation(verts, arr, out, name=name)


def algebra_from_data(d: dict, where: str = "$") -> Algebra:
    q = quiver_from_data(_need(d, "quiver", dict, where), f"{where}.quiver", str(d.get("name", "")))
    try:
        return algebra_from_quiver(q)
    except AlgebraError as exc:
        raise SpecError(f"{where}.quiver: {exc}") from None


def _word_matrices(a: Algebra, gens: dict, n: int, where: str, left: bool) -> np.ndarray:
    """Full action array from generator matrices, via the path words of ``a``."""
    p = el.prime()
    if n == 0:
        return np.zeros((a.dim, 0, 0), dtype=np.int64)
    mats = {}
    for lab, m in gens.items():
        arr = np.asarray(m, dtype=np.int64)
        if arr.shape != (n, n):
            raise SpecError(f"{where}.{lab}: expected a {n}x{n} matrix")
        mats[str(lab)] = arr % p
    vlabels = list(a.vertex_labels)
    out = np.zeros((a.dim, n, n), dtype=np.int64)
    for b in range(a.dim):
        w = a.words[b]
        if b in a.idem:
            lab = vlabels[a.idem.index(b)]
            if lab not in mats:
                raise SpecError(f"{where}: missing matrix for vertex '{lab}'")
            out[b] = mats[lab]
            continue
        acc = el.identity(n)
        for x in (reversed(w) if left else w):
            if x not in mats:
                raise SpecError(f"{where}: missing matrix for arrow '{x}'")
            acc = (acc @ mats[x]) % p
        out[b] = acc
    return out


def triangular_from_data(d: dict, where: str = "$") -> tuple[Algebra, Triangular]:
    from .modcat import Bimodule, ModuleError

    t = _need(d, "triangular", dict, where)
    b = algebra_from_data(_need(t, "B", dict, f"{where}.triangular"), f"{where}.triangular.B")
    c = algebra_from_data(_need(t, "C", dict, f"{where}.triangular"), f"{where}.triangular.C")
    m = _need(t, "M", dict, f"{where}.triangular")
    n = _need(m, "dim", int, f"{where}.triangular.M")
    mw = f"{where}.triangular.M"
    left = _word_matrices(c, _need(m, "left", dict, mw), n, f"{mw}.left", left=True)
    right = _word_matrices(b, _need(m, "right", dict, mw), n, f"{mw}.right", left=False)
    try:
        bim = Bimodule(c, b, left, right)
        a, e = triangular(b, c, bim)
    except (AlgebraError, ModuleError) as exc:
        raise SpecError(f"{mw}: {exc}") from None
    a.name = str(d.get("name", a.name))
    return a, split_triangular(a, sorted(e.vertices))


def load_data(d: dict, source: str = "<spec>") -> LoadedSpec:
    where = "$"
    _set_field(d, where)
    name = str(d.get("name", Path(source).stem))
    if "triangular" in d:
        a, tri = triangular_from_data(d, where)
        return LoadedSpec(name, a, tri, d)
    a = algebra_from_data(d, where)
    a.name = name
    tri = None
    if "e" in d:
        e = d["e"]
        if not isinstance(e, list) or any(str(v) not in a.vertex_index for v in e):
            raise SpecError(f"{where}.e: expected a list of vertex labels")
        try:
            tri = split_triangular(a, [a.vertex_index[str(v)] for v in e])
        except AlgebraError as exc:
            raise SpecError(f"{where}.e: {exc}") from None
    return LoadedSpec(name, a, tri, d)


_WS = re.compile(r"[ \t\n\r]*")
_PART = re.compile(r"\.(\w+)|\[(\d+)\]")


def _skip_ws(text: str, i: int) -> int:
    return _WS.match(text, i).end()


def locate(text: str, where: str) -> tuple[int, int] | None:
    """Line and column of the value at a ``$.a.b[3]`` path in valid JSON text."""
    dec = json.JSONDecoder()
    i = _skip_ws(text, 0)
    for key, idx in _PART.findall(where[1:]):
        if key:
            if text[i] != "{":
                return None
            i = _skip_ws(text, i + 1)
            while text[i] != "}":
                name, i = json.decoder.scanstring(text, i + 1)
                i = _skip_ws(text, _skip_ws(text, i) + 1)
                if name == key:
                    break
                i = _skip_ws(text, dec.raw_decode(text, i)[1])
                if text[i] == ",":
                    i = _skip_ws(text, i + 1)
            else:
                return None
        else:
            if text[i] != "[":
                return None
            i = _skip_ws(text, i + 1)
            for _ in range(int(idx)):
                if text[i] == "]":
                    return None
                i = _skip_ws(text, dec.raw_decode(text, i)[1])
                if text[i] == ",":
                    i = _skip_ws(text, i + 1)
            if text[i] == "]":
                return None
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


def _with_position(exc: SpecError, text: str, source: str) -> SpecError:
    msg = str(exc)
    where, _, rest = msg.partition(": ")
    if not where.startswith("$"):
        return exc
    m = re.match(r"relation (\d+): ", rest)
    if m and where.endswith(".quiver"):
        where = f"{where}.relations[{m.group(1)}]"
    try:
        pos = locate(text, where)
    except (ValueError, IndexError):
        pos = None
    if pos is None:
        return SpecError(f"{source}: {msg}")
    return SpecError(f"{source}:{pos[0]}:{pos[1]}: {where}: {rest}")


def load_spec(path) -> LoadedSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    data = parse_json(text, str(path))
    try:
        return load_data(data, str(path))
    except SpecError as exc:
        raise _with_position(exc, text, str(path)) from None


def example_path(name: str) -> Path:
    """Path of a bundled example spec, e.g. ``"golden"``."""
    return Path(__file__).parent / "data" / f"{name}.json"


def load_example(name: str) -> LoadedSpec:
    return load_spec(example_path(name))
