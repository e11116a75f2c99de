import json

import numpy as np
import pytest

from recollada import exactlin as el
from recollada import modcat as mc
from recollada.specfile import SpecError, example_path, load_data, load_spec, locate, parse_json

LT2_TRI = {
    "name": "lt2-tri", "field": 101,
    "triangular": {
        "B": {"quiver": {"vertices": ["1"], "arrows": [], "relations": []}},
        "C": {"quiver": {"vertices": ["2"], "arrows": [], "relations": []}},
        "M": {"dim": 1, "left": {"2": [[1]]}, "right": {"1": [[1]]}}}}

PRODUCT_TRI = {
    "name": "product-tri",
    "triangular": {
        "B": {"quiver": {"vertices": ["1"], "arrows": [["x", "1", "1"]], "relations": [[[1, ["x", "x"]]]]}},
        "C": {"quiver": {"vertices": ["2"], "arrows": [], "relations": []}},
        "M": {"dim": 0, "left": {"2": []}, "right": {"1": []}}}}


def write(tmp_path, text, name="spec.json"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_bundled_examples_load(specs):
    for name, s in specs.items():
        assert example_path(name).exists()
        assert s.algebra.dim > 0
    assert specs["golden"].tri is not None and specs["field"].tri is None


def test_golden_e_is_vertex_3(golden):
    a = golden.algebra
    assert [a.vertex_labels[v] for v in golden.tri.c_verts] == ["3"]


def test_triangular_variant_matches_quiver_form(lt2):
    s = load_data(json.loads(json.dumps(LT2_TRI)))
    assert s.algebra.dim == lt2.algebra.dim == 3
    assert sorted(s.algebra.cartan.ravel().tolist()) == sorted(lt2.algebra.cartan.ravel().tolist())
    assert s.tri.m.dim == 1 and s.tri.stratifying_witness()


def test_triangular_variant_with_zero_bimodule():
    s = load_data(PRODUCT_TRI)
    assert s.algebra.dim == 3 and s.tri.m.dim == 0
    assert mc.gorenstein_check(s.algebra) == (0, 0)


def test_triangular_matrices_must_be_square():
    bad = json.loads(json.dumps(LT2_TRI))
    bad["triangular"]["M"]["left"]["2"] = [[1, 0]]
    with pytest.raises(SpecError, match="1x1"):
        load_data(bad)


def test_triangular_missing_generator():
    bad = json.loads(json.dumps(LT2_TRI))
    del bad["triangular"]["M"]["right"]["1"]
    with pytest.raises(SpecError, match="missing matrix"):
        load_data(bad)


def test_field_key_sets_prime():
    d = {"field": 7, "quiver": {"vertices": ["1"], "arrows": [], "relations": []}}
    load_data(d)
    assert el.prime() == 7
    with pytest.raises(SpecError, match="field"):
        load_data({"field": 100, "quiver": d["quiver"]})
    with pytest.raises(SpecError, match="field"):
        load_data({"field": True, "quiver": d["quiver"]})


def test_syntax_error_position(tmp_path):
    p = write(tmp_path, '{"quiver": {"vertices": ["1"],\n  "arrows": [["x","1","1"]] "relations": []}}')
    with pytest.raises(SpecError, match=r"spec.json:2:29:"):
        load_spec(p)


def test_semantic_error_positions(tmp_path):
    p = write(tmp_path, '{"quiver": {"vertices": ["1"],\n "arrows": [["x","1","1"]],\n'
                        ' "relations": [[[1, ["x","x"]]],\n    [[1, ["x", "y"]]]]}}')
    with pytest.raises(SpecError, match=r"spec.json:4:5: \$\.quiver\.relations\[1\].*unknown arrow 'y'"):
        load_spec(p)
    p = write(tmp_path, '{"quiver": {"vertices": ["1"],\n "arrows": [["x","1"]], "relations": []}}')
    with pytest.raises(SpecError, match=r":2:13: \$\.quiver\.arrows\[0\]"):
        load_spec(p)
    p = write(tmp_path, '{"name":"q", "e": ["7"],\n "quiver": {"vertices": ["1"], "arrows": [], "relations": []}}')
    with pytest.raises(SpecError, match=r":1:19: \$\.e"):
        load_spec(p)


def test_missing_keys_and_files(tmp_path):
    with pytest.raises(SpecError, match="missing key 'quiver'"):
        load_data({"name": "x"})
    with pytest.raises(SpecError, match="top level"):
        parse_json("[1, 2]")
    with pytest.raises(SpecError):
        load_spec(tmp_path / "absent.json")


def test_bad_relation_terms():
    q = {"vertices": ["1"], "arrows": [["x", "1", "1"]], "relations": [[["x", 1]]]}
    with pytest.raises(SpecError, match=r"relations\[0\]\[0\]"):
        load_data({"quiver": q})
    q["relations"] = [[]]
    with pytest.raises(SpecError, match="nonempty"):
        load_data({"quiver": q})


def test_locate():
    text = '{"a": {"b": [10, 20,\n  {"c": 3}]}}'
    assert locate(text, "$.a") == (1, 7)
    assert locate(text, "$.a.b[1]") == (1, 18)
    assert locate(text, "$.a.b[2].c") == (2, 9)
    assert locate(text, "$.a.z") is None
    assert locate(text, "$.a.b[5]") is None


def test_non_stratifying_choice_of_e(tmp_path):
    p = write(tmp_path, json.dumps({"name": "up", "e": ["1"],
                                    "quiver": {"vertices": ["1", "2"], "arrows": [["a", "2", "1"]],
                                               "relations": []}}))
    with pytest.raises(SpecError, match=r"\$\.e"):
        load_spec(p)


def test_word_order_in_bimodule_actions():
    """An arrow ``x`` over ``k[x]/x^2`` acting nilpotently on both sides."""
    nil = [[0, 1], [0, 0]]
    d = {"triangular": {
        "B": {"quiver": {"vertices": ["1"], "arrows": [["x", "1", "1"]], "relations": [[[1, ["x", "x"]]]]}},
        "C": {"quiver": {"vertices": ["2"], "arrows": [], "relations": []}},
        "M": {"dim": 2, "left": {"2": np.eye(2, dtype=int).tolist()}, "right": {"1": [[1, 0], [0, 1]], "x": nil}}}}
    s = load_data(d)
    s.algebra.validate()
    s.tri.m.validate()
    assert s.algebra.dim == 2 + 1 + 2
