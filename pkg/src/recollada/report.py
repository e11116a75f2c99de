"""Deterministic JSON serialization of complexes, modules and reports."""

from __future__ import annotations

import json

import numpy as np

from .algebra import Algebra


def element(a: Algebra, v) -> dict:
    """Sparse ``{basis label: coefficient}`` form of an algebra element."""
    return {a.labels[i]: int(v[i]) for i in np.nonzero(v)[0]}


def complex_json(x) -> dict:
    a = x.algebra
    terms = {str(n): [a.vertex_labels[i] for i in x.terms[n]] for n in x.degrees}
    diffs = {}
    for n in sorted(x.diffs):
        m = x.diffs[n]
        entries = []
        for r in range(m.shape[0]):
            for s in range(m.shape[1]):
                if m[r, s].any():
                    entries.append([r, s, element(a, m[r, s])])
        if entries:
            diffs[str(n)] = entries
    return {"terms": terms, "diffs": diffs}


def module_json(m) -> dict:
    a = m.algebra
    acts = {}
    for b in range(a.dim):
        mat = m.act[b]
        if mat.any() and b not in a.idem:
            acts[a.labels[b]] = mat.tolist()
    return {"dim": m.dim, "dimvec": m.dimvec.tolist(),
            "vertices": [a.vertex_labels[v] for v in m.vertex], "action": acts}


def entry(axiom: str, status: str, check: str = "", witness=None, **detail) -> dict:
    out = {"axiom": axiom, "check": check, "status": status}
    if detail:
        out["detail"] = detail
    if witness is not None:
        out["witness"] = witness
    return out


def summarize(entries: list) -> dict:
    counts = {"pass": 0, "fail": 0, "undetermined": 0}
    for e in entries:
        counts[e["status"]] = counts.get(e["status"], 0) + 1
    return counts


def sort_entries(entries: list) -> list:
    return sorted(entries, key=lambda e: json.dumps(
        [e["axiom"], e.get("check", ""), e.get("detail", {})], sort_keys=True))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
