import numpy as np
import pytest

from recollada import homotopy as ht
from recollada import modcat as mc
from recollada import recollement as rc


@pytest.fixture(scope="module")
def golden_r(golden):
    return rc.six_functors(golden.tri)


def test_bimodule_dimensions(golden_r):
    dims = {k: v.dim for k, v in golden_r.bimodules.items()}
    assert dims["A/AeA_AB"] == dims["A/AeA_BA"] == 6
    assert (dims["eA"], dims["Ae"], dims["A"]) == (4, 2, 10)
    for n in golden_r.bimodules.values():
        n.validate()


def test_wiring(golden_r):
    r = golden_r
    assert (r.i_upper.source, r.i_upper.target) == (r.middle, r.outer)
    assert (r.i_lower.source, r.i_shriek.target) == (r.outer, r.outer)
    assert (r.j_shriek.source, r.j_upper.target, r.j_lower.source) == (r.outer2,) * 3
    with pytest.raises(ValueError):
        rc.compose(r.i_upper, r.j_shriek)


def test_compose_flattens_and_drops_identities(golden_r):
    r = golden_r
    f = rc.compose(rc.identity_functor(r.middle), r.i_upper, rc.compose(r.i_lower, r.j_upper))
    assert f.kind == "composite" and len(f.parts) == 3
    assert rc.compose(r.i_upper, rc.identity_functor(r.outer)) is r.i_upper


def test_j_upper_kills_image_of_i_lower(golden_r):
    r = golden_r
    t, _, _ = mc.tensor_bimodules(r.bimodules["A/AeA_BA"], r.bimodules["Ae"])
    assert t.dim == 0
    for x in ht.sample_pool(r.outer, 0, 8):
        assert ht.is_acyclic(rc.apply(r.j_upper, rc.apply(r.i_lower, x)))


def test_i_lower_on_projective_stalks(golden_r):
    r = golden_r
    t = r.tri
    for i in range(r.outer.nvert):
        y = rc.apply(r.i_lower, ht.stalk(r.outer, [i]))
        h = ht.homology_modules(y)
        assert set(h) == {0}
        u = mc.tri_unpack(h[0], t)
        assert u.y.dim == 0 and mc.module_iso_test(u.x, mc.proj_module(r.outer, i)) == "iso"


def test_j_shriek_gives_e_corner_projectives(golden_r):
    r = golden_r
    t = r.tri
    for i, v in enumerate(t.c_verts):
        y = rc.apply(r.j_shriek, ht.stalk(r.outer2, [i]))
        assert ht.iso_test(y, ht.stalk(r.middle, [v])) == "iso"


def test_counit_on_image_of_j_shriek(golden_r):
    r = golden_r
    x = ht.stalk(r.middle, list(r.tri.c_verts))
    src, tgt, f = rc.counit_jshriek(r, x)
    assert ht.is_quasi_iso(src, tgt, f)


def test_counit_vanishes_on_image_of_i_lower(golden_r):
    r = golden_r
    x = rc.apply(r.i_lower, ht.stalk(r.outer, [0]))
    src, _, f = rc.counit_jshriek(r, x)
    assert ht.is_acyclic(src)
    src, tgt, g = rc.unit_istar(r, x)
    assert ht.is_quasi_iso(src, tgt, g)


@pytest.mark.parametrize("name", ["golden", "lt2", "product"])
def test_verify_recollement_passes(specs, name):
    r = rc.six_functors(specs[name].tri)
    rep = rc.verify_recollement(r, seed=7, pool_size=12)
    s = rep["summary"]
    assert s["fail"] == 0 and s["undetermined"] == 0 and s["pass"] > 200
    axioms = {e["axiom"] for e in rep["entries"]}
    assert {"R1", "R2", "R3", "R4", "Im/Ker"} <= axioms


def test_verification_is_deterministic(lt2):
    r = rc.six_functors(lt2.tri)
    a = rc.verify_recollement(r, seed=3, pool_size=6)
    b = rc.verify_recollement(rc.six_functors(lt2.tri), seed=3, pool_size=6)
    assert a == b


def test_product_has_i_shriek_equal_i_upper(product):
    r = rc.six_functors(product.tri)
    for x in ht.sample_pool(r.middle, 0, 10):
        assert ht.iso_test(rc.apply(r.i_shriek, x), rc.apply(r.i_upper, x)) == "iso"


def test_wrong_adjoint_pair_is_caught(lt2):
    """``(i^!, i_*)`` is not an adjoint pair when ``M != 0``."""
    r = rc.six_functors(lt2.tri)
    pools = rc.default_pools(r, 7, 8)
    pairs = rc.sample_pairs(np.random.default_rng(0), len(pools["A"]), len(pools["B"]), 24)
    entries = rc.adjunction_entries("R1", r.i_shriek, r.i_lower, pools["A"], pools["B"], pairs, rc.Evaluator())
    bad = [e for e in entries if e["status"] == "fail"]
    assert bad and all(e["witness"] for e in bad)


def test_not_stratifying(lt2):
    a = lt2.algebra
    with pytest.raises(rc.NotStratifying):
        rc.six_functors(a, [a.vertex_index["1"]])


def test_apply_checks_source(golden_r, lt2):
    with pytest.raises(ValueError):
        rc.apply(golden_r.i_upper, ht.stalk(lt2.algebra, [0]))


def test_sample_pairs():
    rng = np.random.default_rng(0)
    assert rc.sample_pairs(rng, 0, 3, 5) == []
    assert len(rc.sample_pairs(rng, 2, 2, 24)) == 4
    p = rc.sample_pairs(rng, 10, 10, 24)
    assert len(p) == len(set(p)) == 24
