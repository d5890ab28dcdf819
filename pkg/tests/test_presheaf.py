import pytest

from src.core.errors import BaseMismatch, ValidationError
from src.core.fincat import opposite, product
from src.core.presheaf import (AbPresheaf, AbPresheafMap, SetPresheaf, colim_ab, constant_z, coproduct, direct_sum,
                               empty_presheaf, external_product, identity_map, representable, restrict_ab,
                               restrict_set, set_product, terminal_presheaf, validate_ab, validate_map, validate_set,
                               whitehead, zero_map, zero_presheaf)
from src.core.zlinalg import FgAbGroup, IntMatrix
from src.services.corpus import resolve_functor, resolve_presheaf
from src.services.sampling import random_ab_presheaf, random_set_presheaf


def test_representable_values(delta2):
    x = representable(delta2, delta2.obj_index["d1"])
    assert validate_set(x) == []
    assert [x.size(a) for a in range(3)] == [2, 3, 4]


def test_whitehead_and_colimit(cat):
    for name in ("chain3", "cospan", "bz2", "delta2"):
        c = cat(name)
        for a in range(c.n_objects):
            x = whitehead(representable(c, a))
            assert validate_ab(x) == []
            assert colim_ab(x) == FgAbGroup(1)


def test_colimit_counts_components(cat):
    assert colim_ab(constant_z(cat("discrete2"))) == FgAbGroup(2)
    assert colim_ab(constant_z(cat("square"))) == FgAbGroup(1)
    assert colim_ab(zero_presheaf(cat("square"))) == FgAbGroup()


def test_sign_representation_coinvariants(bz2):
    x = resolve_presheaf("bz2_sign.apsh", bz2)
    assert isinstance(x, AbPresheaf)
    assert colim_ab(x) == FgAbGroup(0, (2,))


def test_set_constructions(cospan):
    a, c = cospan.obj_index["a"], cospan.obj_index["c"]
    x = coproduct(representable(cospan, a), terminal_presheaf(cospan))
    assert validate_set(x) == []
    assert x.size(c) == 2
    y = set_product(representable(cospan, c), representable(cospan, c))
    assert validate_set(y) == []
    assert validate_set(empty_presheaf(cospan)) == []
    with pytest.raises(BaseMismatch):
        coproduct(x, terminal_presheaf(opposite(cospan)))


def test_identity_violation_is_reported(chain2):
    # X(0) = {p}, X(1) = {q, r} : l'identité de 1 doit agir par (0, 1)
    x = SetPresheaf(chain2, (("p",), ("q", "r")), ((0,), (0, 0), (1, 0)))
    assert "X(id_1) n'est pas l'identité" in validate_set(x)


def test_external_product_and_direct_sum(cat):
    d1, bz2 = cat("delta1"), cat("bz2")
    x = external_product(whitehead(representable(d1, 1)), constant_z(bz2))
    assert x.base == product(d1, bz2)
    assert validate_ab(x) == []
    s = direct_sum(constant_z(d1), whitehead(representable(d1, 0)))
    assert validate_ab(s) == []
    assert colim_ab(s) == FgAbGroup(2)


def test_maps_and_naturality(cospan):
    x = whitehead(terminal_presheaf(cospan))
    y = constant_z(cospan)
    assert validate_map(identity_map(x)) == []
    assert validate_map(zero_map(x, y)) == []
    twice = AbPresheafMap(x, y, tuple(IntMatrix.from_rows([[2]]) for _ in range(3)))
    assert twice.compose(identity_map(x)).components == twice.components
    with pytest.raises(ValidationError):
        AbPresheafMap(x, y, (IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[2]])))


def test_restriction_along_functor(cospan):
    u = resolve_functor("cospan_to_terminal")
    y = restrict_set(u, terminal_presheaf(u.cod))
    assert y == terminal_presheaf(cospan)


def test_random_presheaves_are_valid(rng, cat):
    for name in ("chain3", "cospan", "bz3"):
        c = cat(name)
        for _ in range(5):
            assert validate_set(random_set_presheaf(rng, c)) == []
            x, iso = random_ab_presheaf(rng, c)
            assert validate_ab(x) == []
            assert colim_ab(x) == colim_ab(iso.source)


def test_constant_and_point_presheaves(cat):
    for name in ("cospan", "bz3", "delta2"):
        c = cat(name)
        assert whitehead(terminal_presheaf(c)) == constant_z(c)
    for name in ("m1_w2", "delta_diag1"):
        u = resolve_functor(name)
        assert restrict_ab(u, constant_z(u.cod)) == constant_z(u.dom)


def test_external_product_restricted_to_the_diagonal(rng, cat):
    u = resolve_functor("delta_diag1")
    d1 = cat("delta1")
    x, _ = random_ab_presheaf(rng, d1)
    y = whitehead(representable(d1, 1))
    z = restrict_ab(u, external_product(x, y))
    assert validate_ab(z) == []
    assert z.ranks == tuple(rx * ry for rx, ry in zip(x.ranks, y.ranks))
