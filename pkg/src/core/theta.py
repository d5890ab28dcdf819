"""
Produits en couronne Δ≀A tronqués, foncteurs I_a, μ_A, m_n et catégories Θ_n.

Un objet [n; a_1 … a_n] est une largeur n et n lettres, objets de A. Un
morphisme [φ, f] : [n; a] → [m; a'] est une application croissante
φ : [n] → [m] et une famille f_{ji} : a_i → a'_j indexée par les couples
(i, j) avec 1 ≤ i ≤ n et φ(i−1) < j ≤ φ(i). Les lettres sont indexées à
partir de 1, comme dans cette formule.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Dict, List, Sequence, Tuple

from src.core.errors import NotComposable, ValidationError
from src.core.fincat import (FinCat, FinFunctor, build_delta_trunc, compose_functors, delta_maps,
                             identity_functor, is_faithful, is_full, monotone_maps, power, product,
                             product_functor, terminal_category)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WreathObject:
    width: int
    letters: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if len(self.letters) != self.width:
            raise ValidationError(f"{len(self.letters)} lettres pour une largeur {self.width}")


@dataclass(frozen=True)
class WreathMorphism:
    dom: WreathObject
    cod: WreathObject
    phi: Tuple[int, ...]
    family: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(self.phi))
        object.__setattr__(self, "family", tuple(self.family))
        phi = self.phi
        if len(phi) != self.dom.width + 1 or any(not 0 <= v <= self.cod.width for v in phi) \
                or any(a > b for a, b in zip(phi, phi[1:])):
            raise ValidationError(f"{phi} n'est pas croissante de [{self.dom.width}] vers [{self.cod.width}]")
        pairs = len(index_set(phi))
        if len(self.family) != pairs:
            raise ValidationError(f"{len(self.family)} morphismes pour {pairs} couples (i, j)")


def index_set(phi: Sequence[int]) -> List[Tuple[int, int]]:
    """Couples (i, j), 1 ≤ i ≤ n, φ(i−1) < j ≤ φ(i), triés par i puis j."""
    return [(i, j) for i in range(1, len(phi)) for j in range(phi[i - 1] + 1, phi[i] + 1)]


def wreath_compose(base: FinCat, g: WreathMorphism, f: WreathMorphism) -> WreathMorphism:
    """[φ', f'] ∘ [φ, f] = [φ'φ, f''] avec f''_{i''i} = f'_{i''i'} f_{i'i}."""
    if f.cod != g.dom:
        raise NotComposable("le but de f n'est pas la source de g")
    phi, phi2 = f.phi, g.phi
    fam = dict(zip(index_set(phi), f.family))
    fam2 = dict(zip(index_set(phi2), g.family))
    phi3 = tuple(phi2[x] for x in phi)
    family = []
    for i, i2 in index_set(phi3):
        mid = next(k for k in range(phi[i - 1] + 1, phi[i] + 1) if phi2[k - 1] < i2 <= phi2[k])
        family.append(base.compose(fam2[(mid, i2)], fam[(i, mid)]))
    return WreathMorphism(f.dom, g.cod, phi3, tuple(family))


def hom_count(base: FinCat, dom: WreathObject, cod: WreathObject) -> int:
    """Σ_φ Π_{(i,j)} |Hom_A(a_i, a'_j)|."""
    total = 0
    for phi in monotone_maps(dom.width, cod.width):
        prod = 1
        for i, j in index_set(phi):
            prod *= len(base.hom(dom.letters[i - 1], cod.letters[j - 1]))
        total += prod
    return total


def _family_name(names: Sequence[str]) -> str:
    return "".join(f"({n})" for n in names)


class WreathTable:
    """Énumération de Δ≀A en largeur ≤ wmax et catégorie finie associée."""

    def __init__(self, base: FinCat, wmax: int, name: str = ""):
        self.base = base
        self.wmax = wmax
        self.objects: List[WreathObject] = [
            WreathObject(n, letters) for n in range(wmax + 1)
            for letters in iproduct(range(base.n_objects), repeat=n)]
        self.obj_index: Dict[WreathObject, int] = {w: k for k, w in enumerate(self.objects)}
        self.morphisms: List[WreathMorphism] = []
        for dom in self.objects:
            for cod in self.objects:
                for phi in monotone_maps(dom.width, cod.width):
                    choices = [base.hom(dom.letters[i - 1], cod.letters[j - 1]) for i, j in index_set(phi)]
                    for fam in iproduct(*choices):
                        self.morphisms.append(WreathMorphism(dom, cod, phi, tuple(fam)))
        self.index: Dict[WreathMorphism, int] = {m: k for k, m in enumerate(self.morphisms)}
        self.category = self._build(name or f"wr({base.name},{wmax})")

    def object_name(self, w: WreathObject) -> str:
        return f"[{w.width};{'|'.join(self.base.objects[a] for a in w.letters)}]"

    def morphism_name(self, m: WreathMorphism) -> str:
        fam = _family_name([self.base.mor_names[f] for f in m.family])
        return f"<{self.object_name(m.dom)}/{'.'.join(map(str, m.phi))}/{fam}/{self.object_name(m.cod)}>"

    def identity(self, w: WreathObject) -> WreathMorphism:
        return WreathMorphism(w, w, tuple(range(w.width + 1)),
                              tuple(self.base.identity[a] for a in w.letters))

    def _build(self, name: str) -> FinCat:
        morphisms = [(self.morphism_name(m), self.obj_index[m.dom], self.obj_index[m.cod])
                     for m in self.morphisms]
        identity = [self.index[self.identity(w)] for w in self.objects]
        boundary = [k for k, w in enumerate(self.objects)
                    if w.width == self.wmax or any(a in self.base.boundary for a in w.letters)]
        base, morphs, index = self.base, self.morphisms, self.index

        def rule(g: int, f: int) -> int:
            return index[wreath_compose(base, morphs[g], morphs[f])]
        cat = FinCat([self.object_name(w) for w in self.objects], morphisms, identity, rule,
                     boundary=boundary, name=name)
        logger.debug("Δ≀%s en largeur ≤ %d: %d objets, %d morphismes",
                     self.base.name, self.wmax, cat.n_objects, cat.n_morphisms)
        return cat


def wreath_trunc(a: FinCat, wmax: int) -> FinCat:
    return WreathTable(a, wmax).category


def mu_functor(a: FinCat, k: int, table: WreathTable = None) -> FinFunctor:
    """μ_A : Δ_{≤k} × A → Δ≀A, (Δ_n, x) ↦ [n; x … x], (θ, g) ↦ [θ, (g …)]."""
    table = table or WreathTable(a, k)
    delta = build_delta_trunc(k)
    dom = product(delta, a)
    obj_map = []
    for n in range(k + 1):
        for x in range(a.n_objects):
            obj_map.append(table.obj_index[WreathObject(n, (x,) * n)])
    mor_map = []
    for i, j, theta in delta_maps(k):
        for g in range(a.n_morphisms):
            x, y = a.src[g], a.tgt[g]
            m = WreathMorphism(WreathObject(i, (x,) * i), WreathObject(j, (y,) * j), theta,
                               (g,) * len(index_set(theta)))
            mor_map.append(table.index[m])
    return FinFunctor(dom, table.category, tuple(obj_map), tuple(mor_map), f"mu_{a.name}")


def i_functor(a: FinCat, x: int, k: int, table: WreathTable = None) -> Tuple[FinFunctor, Dict[str, bool]]:
    """
    I_x : Δ_{≤k} → Δ≀A, restriction de μ_A à Δ × {x}.

    Returns:
        Le foncteur et le rapport {faithful, fully_faithful, trivial_endomorphisms}.
    """
    table = table or WreathTable(a, k)
    delta = build_delta_trunc(k)
    ident = a.identity[x]
    obj_map = [table.obj_index[WreathObject(n, (x,) * n)] for n in range(k + 1)]
    mor_map = [table.index[WreathMorphism(WreathObject(i, (x,) * i), WreathObject(j, (x,) * j), theta,
                                          (ident,) * len(index_set(theta)))]
               for i, j, theta in delta_maps(k)]
    u = FinFunctor(delta, table.category, tuple(obj_map), tuple(mor_map), f"I_{a.objects[x]}")
    trivial = len(a.hom(x, x)) == 1
    faithful = is_faithful(u)
    return u, {"faithful": faithful, "fully_faithful": faithful and is_full(u), "trivial_endomorphisms": trivial}


def wreath_functor(u: FinFunctor, wmax: int, dom_table: WreathTable = None,
                   cod_table: WreathTable = None) -> FinFunctor:
    """Δ≀F : [n; a] ↦ [n; F a], [φ, f] ↦ [φ, F f]."""
    dom_table = dom_table or WreathTable(u.dom, wmax)
    cod_table = cod_table or WreathTable(u.cod, wmax)
    obj_map = []
    for w in dom_table.objects:
        obj_map.append(cod_table.obj_index[WreathObject(w.width, tuple(u.obj_map[a] for a in w.letters))])
    mor_map = []
    for m in dom_table.morphisms:
        image = WreathMorphism(
            WreathObject(m.dom.width, tuple(u.obj_map[a] for a in m.dom.letters)),
            WreathObject(m.cod.width, tuple(u.obj_map[a] for a in m.cod.letters)),
            m.phi, tuple(u.mor_map[f] for f in m.family))
        mor_map.append(cod_table.index[image])
    return FinFunctor(dom_table.category, cod_table.category, tuple(obj_map), tuple(mor_map),
                      f"Delta~{u.name}")


# ---------------------------------------------------------------------------
# Θ_n
# ---------------------------------------------------------------------------

class ThetaTower:
    """Θ_0 = e, Θ_{n+1} = Δ≀Θ_n, chaque niveau tronqué en largeur k."""

    def __init__(self, k: int):
        self.k = k
        self.base = terminal_category()
        self._tables: List[WreathTable] = []

    def table(self, n: int) -> WreathTable:
        """Table de Θ_n comme Δ≀Θ_{n−1} (n ≥ 1)."""
        while len(self._tables) < n:
            below = self.category(len(self._tables))
            self._tables.append(WreathTable(below, self.k, name=f"theta{len(self._tables) + 1}_w{self.k}"))
        return self._tables[n - 1]

    def category(self, n: int) -> FinCat:
        if n == 0:
            return self.base
        return self.table(n).category


@lru_cache(maxsize=8)
def theta_tower(k: int) -> ThetaTower:
    return ThetaTower(k)


def theta_trunc(n: int, k: int) -> FinCat:
    if n < 0:
        raise ValidationError(f"niveau négatif: {n}")
    if k < 0:
        raise ValidationError(f"largeur négative: {k}")
    return theta_tower(k).category(n)


def theta_inclusion(n: int, k: int) -> FinFunctor:
    """Θ_n ↪ Θ_{n+1} : ι_0 choisit [0;], ι_n = Δ≀ι_{n−1}."""
    tower = theta_tower(k)
    t1 = tower.table(1)
    u = FinFunctor(tower.category(0), t1.category, (t1.obj_index[WreathObject(0, ())],),
                   (t1.index[t1.identity(WreathObject(0, ()))],), "iota0")
    for level in range(1, n + 1):
        u = wreath_functor(u, k, tower.table(level), tower.table(level + 1))
        u = FinFunctor(u.dom, u.cod, u.obj_map, u.mor_map, f"iota{level}")
    return u


def m_functor(n: int, k: int) -> FinFunctor:
    """m_0 = id_e ; m_{n+1} = μ_{Θ_n} ∘ (id_Δ × m_n), de (Δ_{≤k})^{n+1} vers Θ_{n+1}."""
    tower = theta_tower(k)
    delta = build_delta_trunc(k)
    m = identity_functor(tower.category(0))
    for level in range(n):
        mu = mu_functor(tower.category(level), k, tower.table(level + 1))
        step = compose_functors(mu, product_functor(identity_functor(delta), m, dom=product(delta, m.dom),
                                                    cod=mu.dom))
        dom = power(delta, level + 1)
        # Δ × e a les mêmes indices que Δ.
        m = FinFunctor(dom, step.cod, step.obj_map, step.mor_map, f"m{level + 1}")
    return m
