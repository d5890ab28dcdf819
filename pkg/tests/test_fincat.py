import pytest

from src.core.errors import NotAGroup, NotAntisymmetric, NotComposable, ValidationError
from src.core.fincat import (FinCat, FinFunctor, build_delta_trunc, build_group_cat, build_poset,
                             category_of_elements, compose_functors, connected_components, cyclic_group_table,
                             delta_maps, diagonal_functor, discrete_category, functor_by_names, identity_functor,
                             is_faithful, is_full, isomorphism_violations, monotone_maps, object_functor, opposite,
                             power, product, projection_functor, slice_over, terminal_category, terminal_functor,
                             terminal_objects, validate, validate_functor)
from src.core.presheaf import empty_presheaf, representable, terminal_presheaf


@pytest.mark.parametrize("name", ["terminal", "chain2", "chain3", "cospan", "square", "discrete2",
                                  "bz2", "bz3", "delta1", "delta2", "delta3", "delta1x1"])
def test_bundled_categories_are_valid(cat, name):
    assert validate(cat(name)) == []


def test_delta_counts():
    # |Hom([i], [j])| = C(i + j + 1, i + 1)
    assert build_delta_trunc(1).n_morphisms == 7
    assert build_delta_trunc(2).n_morphisms == 31
    assert len(monotone_maps(2, 3)) == 20
    assert build_delta_trunc(3).boundary == frozenset({3})
    assert [m[:2] for m in delta_maps(1)] == [(0, 0), (0, 1), (0, 1), (1, 0), (1, 1), (1, 1), (1, 1)]


def test_compose_and_errors(chain2):
    f = chain2.mor_index["0<1"]
    assert chain2.compose(chain2.identity[1], f) == f
    with pytest.raises(NotComposable):
        chain2.compose(f, f)


def test_broken_associativity_is_reported():
    # a*b = b, b*a = a, a*a = b : (a*b)*a = a mais a*(b*a) = b
    c = FinCat(["*"], [("e", 0, 0), ("a", 0, 0), ("b", 0, 0)], [0],
               {(1, 1): 2, (1, 2): 2, (2, 1): 1, (2, 2): 2}, name="broken")
    violations = validate(c)
    assert violations
    assert any(v.startswith("associativité") for v in violations)


def test_missing_composite_is_reported():
    c = FinCat(["x", "y", "z"], [("id_x", 0, 0), ("id_y", 1, 1), ("id_z", 2, 2), ("f", 0, 1), ("g", 1, 2)],
               [0, 1, 2], {})
    assert validate(c) == ["composé non défini: g * f"]


def test_duplicate_names_rejected():
    with pytest.raises(ValidationError):
        FinCat(["x", "x"], [("id", 0, 0), ("id2", 1, 1)], [0, 1], {})


def test_group_and_poset_builders():
    with pytest.raises(NotAGroup):
        build_group_cat([[0, 1], [0, 1]])
    with pytest.raises(NotAntisymmetric):
        build_poset(2, [(0, 1), (1, 0)])
    bz4 = build_group_cat(cyclic_group_table(4))
    assert validate(bz4) == [] and bz4.n_morphisms == 4
    square = build_poset(["0", "l", "r", "1"], [("0", "l"), ("0", "r"), ("l", "1"), ("r", "1")])
    assert square.n_morphisms == 9
    assert terminal_objects(square) == [3]


def test_opposite_is_an_involution(cat):
    for name in ("cospan", "bz3", "delta2"):
        c = cat(name)
        op = opposite(c)
        assert validate(op) == []
        assert opposite(op) == c
        f = c.mor_index["a<c"] if name == "cospan" else 1
        assert op.src[f] == c.tgt[f]


def test_product_and_power(cat):
    d1 = cat("delta1")
    p = product(d1, d1)
    assert p.n_objects == 4 and p.n_morphisms == 49
    assert validate(p) == []
    assert p == power(d1, 2) == cat("delta1x1")
    assert power(d1, 0) == terminal_category()
    for side in (0, 1):
        assert validate_functor(projection_functor(d1, d1, side)) == []
    diag = diagonal_functor(d1)
    assert validate_functor(diag) == []
    assert is_faithful(diag) and not is_full(diag)
    assert p.boundary == frozenset({1, 2, 3})


def test_functor_helpers(cospan):
    t = terminal_functor(cospan)
    assert validate_functor(t) == []
    pick = object_functor(cospan, cospan.obj_index["c"])
    assert validate_functor(pick) == []
    loop = compose_functors(t, pick)
    assert isomorphism_violations(loop) == []
    assert validate_functor(compose_functors(pick, t)) == []
    bad = FinFunctor(cospan, cospan, (0, 0, 0), tuple(range(cospan.n_morphisms)))
    assert validate_functor(bad)


def test_slice_over_identity_has_terminal_object(cat):
    for name in ("cospan", "square", "delta2"):
        c = cat(name)
        for b in range(c.n_objects):
            s, proj = slice_over(identity_functor(c), b)
            assert validate(s) == []
            assert validate_functor(proj) == []
            assert len(terminal_objects(s)) >= 1


def test_slice_over_terminal_functor_is_the_category(cospan):
    s, proj = slice_over(terminal_functor(cospan), 0)
    assert s.n_objects == cospan.n_objects and s.n_morphisms == cospan.n_morphisms
    assert isomorphism_violations(proj) == []


def test_elements_of_representable_match_slice(cat):
    for name in ("chain3", "bz2", "delta2"):
        c = cat(name)
        for a in range(c.n_objects):
            el, proj = category_of_elements(representable(c, a))
            assert validate(el) == []
            assert validate_functor(proj) == []
            sl, _ = slice_over(identity_functor(c), a)
            assert isomorphism_violations(functor_by_names(el, sl)) == []


def test_slice_boundary_is_propagated(cat):
    d2 = cat("delta2")
    s, _ = slice_over(identity_functor(d2), 0)
    assert s.boundary
    assert all(s.objects[i].startswith("(d2|") for i in s.boundary)


def test_connected_components():
    assert connected_components(discrete_category(["a", "b"])) == [[0], [1]]
    assert connected_components(build_poset(3, [(0, 2), (1, 2)])) == [[0, 1, 2]]


def test_trivial_group_is_the_point():
    e = build_group_cat([[0]])
    assert validate(e) == []
    assert (e.n_objects, e.n_morphisms) == (1, 1)


def test_point_is_a_unit_for_products(chain2):
    p = product(terminal_category(), chain2)
    assert (p.n_objects, p.n_morphisms) == (2, 3)
    assert isomorphism_violations(projection_functor(terminal_category(), chain2, 1)) == []


def test_elements_of_terminal_and_empty_presheaves(cospan):
    el, proj = category_of_elements(terminal_presheaf(cospan))
    assert isomorphism_violations(proj) == []
    empty, _ = category_of_elements(empty_presheaf(cospan))
    assert (empty.n_objects, empty.n_morphisms) == (0, 0)


def test_slice_of_the_diagonal(delta2):
    # objets (a, f : (a, a) → (d1, d1)) : Σ_a |Hom(a, d1)|² = 4 + 9 + 16
    diag = diagonal_functor(delta2)
    s, proj = slice_over(diag, diag.cod.obj_index["(d1|d1)"])
    assert s.n_objects == 29
    assert validate(s) == []
    assert validate_functor(proj) == []
