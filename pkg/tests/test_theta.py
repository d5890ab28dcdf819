import pytest

from src.core.errors import NotComposable, ValidationError
from src.core.fincat import (build_delta_trunc, is_faithful, is_full, isomorphism_violations, terminal_category,
                             validate, validate_functor)
from src.core.homcore import check_wab_aspherical
from src.core.theta import (WreathMorphism, WreathObject, WreathTable, hom_count, i_functor, m_functor, mu_functor,
                            theta_inclusion, theta_tower, theta_trunc, wreath_compose, wreath_functor, wreath_trunc)
from src.services.corpus import resolve_category, resolve_functor


@pytest.fixture(scope="module")
def chain2_table():
    return WreathTable(resolve_category("chain2"), 2)


def test_theta_one_counts():
    # Θ_1 en largeur ≤ k est Δ_{≤k}
    assert theta_trunc(1, 2).n_objects == 3
    assert theta_trunc(1, 2).n_morphisms == 31
    assert theta_trunc(1, 3).n_morphisms == 121
    assert theta_trunc(0, 2) == terminal_category()


def test_theta_two_width_one():
    t = theta_trunc(2, 1)
    assert validate(t) == []
    assert (t.n_objects, t.n_morphisms) == (3, 22)
    assert t.objects[0] == "[0;]"
    assert t.boundary == frozenset({1, 2})


def test_wreath_table_is_a_category(chain2_table):
    c = chain2_table.category
    assert validate(c) == []
    for a, dom in enumerate(chain2_table.objects):
        for b, cod in enumerate(chain2_table.objects):
            assert len(c.hom(a, b)) == hom_count(chain2_table.base, dom, cod)


def test_wreath_compose_identity_and_errors(chain2_table):
    base = chain2_table.base
    for m in chain2_table.morphisms[:40]:
        assert wreath_compose(base, chain2_table.identity(m.cod), m) == m
        assert wreath_compose(base, m, chain2_table.identity(m.dom)) == m
    f = next(m for m in chain2_table.morphisms if m.dom != m.cod)
    with pytest.raises(NotComposable):
        wreath_compose(base, f, f)


def test_i_functor_on_terminal_is_an_isomorphism():
    u, report = i_functor(terminal_category(), 0, 2)
    assert validate_functor(u) == []
    assert isomorphism_violations(u) == []
    assert report == {"faithful": True, "fully_faithful": True, "trivial_endomorphisms": True}


def test_i_functor_needs_trivial_endomorphisms(bz2):
    u, report = i_functor(bz2, 0, 2)
    assert validate_functor(u) == []
    assert report["faithful"]
    assert not report["fully_faithful"]
    assert not report["trivial_endomorphisms"]


def test_mu_and_wreath_functor(chain2_table):
    mu = mu_functor(chain2_table.base, 2, chain2_table)
    assert validate_functor(mu) == []
    u = resolve_functor("chain2_to_terminal")
    wf = wreath_functor(u, 2, dom_table=chain2_table)
    assert validate_functor(wf) == []
    assert wf.cod.n_morphisms == build_delta_trunc(2).n_morphisms


def test_inclusions_are_fully_faithful():
    for n, k in ((0, 2), (1, 1), (0, 3)):
        u = theta_inclusion(n, k)
        assert validate_functor(u) == []
        assert is_faithful(u) and is_full(u)


@pytest.mark.slow
def test_inclusion_into_theta_two_width_two():
    u = theta_inclusion(1, 2)
    assert validate_functor(u) == []
    assert is_faithful(u) and is_full(u)


def test_m_functors_are_valid():
    m1 = m_functor(1, 2)
    assert validate_functor(m1) == []
    assert m1.cod == theta_trunc(1, 2)
    m2 = m_functor(2, 1)
    assert validate_functor(m2) == []
    assert m2.cod == theta_trunc(2, 1)
    assert m2.dom.n_objects == 4


@pytest.mark.parametrize("name", ["m1_w2", "m2_w1"])
def test_m_functors_are_aspherical(name):
    report = check_wab_aspherical(resolve_functor(name), 3)
    assert report.passed


def test_widths_are_enumerated_in_order(chain2_table):
    widths = [w.width for w in chain2_table.objects]
    assert widths == sorted(widths)
    assert chain2_table.objects[0] == WreathObject(0, ())
    assert len(chain2_table.objects) == 1 + 2 + 4


@pytest.mark.parametrize("k", [1, 2, 3])
def test_theta_one_is_the_truncated_simplex_category(k):
    u, report = i_functor(terminal_category(), 0, k)
    assert u.dom == build_delta_trunc(k)
    assert isomorphism_violations(u) == []
    assert report["fully_faithful"]


def test_wreath_over_a_group():
    c = wreath_trunc(resolve_category("bz2"), 2)
    assert validate(c) == []
    assert c.n_objects == 3
    assert c.objects[2] == "[2;*|*]"


def test_wreath_functor_keeps_full_faithfulness():
    wf = wreath_functor(resolve_functor("terminal_to_chain2"), 2)
    assert validate_functor(wf) == []
    assert is_faithful(wf) and is_full(wf)
    collapse = wreath_functor(resolve_functor("bz2_to_terminal"), 1)
    assert not is_faithful(collapse)


def test_m_two_on_objects():
    m2 = m_functor(2, 1)
    names = {m2.dom.objects[a]: m2.cod.objects[b] for a, b in enumerate(m2.obj_map)}
    assert names["(d1|d1)"] == "[1;[1;*]]"
    assert names["(d1|d0)"] == "[1;[0;]]"
    assert names["(d0|d1)"] == "[0;]"


@pytest.mark.slow
def test_theta_two_width_two():
    t = theta_trunc(2, 2)
    assert validate(t) == []
    assert t.n_objects == 13


def test_hom_count_on_random_pairs(rng):
    table = WreathTable(resolve_category("bz2"), 2)
    n = len(table.objects)
    for _ in range(100):
        a, b = rng.randrange(n), rng.randrange(n)
        assert len(table.category.hom(a, b)) == hom_count(table.base, table.objects[a], table.objects[b])


@pytest.mark.slow
def test_hom_count_on_theta_two(rng):
    table = theta_tower(2).table(2)
    n = len(table.objects)
    for _ in range(100):
        a, b = rng.randrange(n), rng.randrange(n)
        assert len(table.category.hom(a, b)) == hom_count(table.base, table.objects[a], table.objects[b])


def test_wreath_morphism_checks_its_data():
    one, two = WreathObject(1, (0,)), WreathObject(2, (0, 0))
    assert len(WreathMorphism(one, two, (0, 2), (5, 6)).family) == 2
    with pytest.raises(ValidationError):
        WreathMorphism(one, two, (0, 2), (5,))
    with pytest.raises(ValidationError):
        WreathMorphism(one, two, (2, 0), ())
    with pytest.raises(ValidationError):
        WreathMorphism(one, two, (0, 1, 2), (5, 6))
    with pytest.raises(ValidationError):
        WreathObject(2, (0,))


def test_negative_levels_are_rejected():
    with pytest.raises(ValidationError):
        theta_trunc(-1, 1)
    with pytest.raises(ValidationError):
        theta_trunc(1, -1)
