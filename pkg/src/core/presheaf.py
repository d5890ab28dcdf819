"""
Préfaisceaux d'ensembles et préfaisceaux abéliens libres sur une catégorie finie.

Conventions : pour f : a → a', l'action d'un préfaisceau d'ensembles est une
suite d'indices de longueur |X(a')| à valeurs dans X(a) ; l'action d'un
préfaisceau abélien est une matrice r_a × r_{a'}. La base de ℤ^(X(a)) est
X(a) dans l'ordre où les éléments sont stockés.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from src.core.errors import BaseMismatch, ValidationError
from src.core.fincat import FinCat, FinFunctor, product
from src.core.zlinalg import FgAbGroup, IntMatrix, cokernel, left_inverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SetPresheaf:
    """Préfaisceau d'ensembles finis ; `values[a]` contient les noms des éléments."""

    base: FinCat
    values: Tuple[Tuple[str, ...], ...]
    actions: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(tuple(v) for v in self.values))
        object.__setattr__(self, "actions", tuple(tuple(int(i) for i in act) for act in self.actions))
        if len(self.values) != self.base.n_objects or len(self.actions) != self.base.n_morphisms:
            raise ValidationError("nombre de valeurs ou d'actions incorrect")
        for f, act in enumerate(self.actions):
            a, a2 = self.base.src[f], self.base.tgt[f]
            if len(act) != len(self.values[a2]) or any(not 0 <= s < len(self.values[a]) for s in act):
                raise ValidationError(f"action de {self.base.mor_names[f]} de mauvaise forme")

    def size(self, a: int) -> int:
        return len(self.values[a])


@dataclass(frozen=True)
class AbPresheaf:
    """Préfaisceau de ℤ-modules libres ; `actions[f]` est de forme r_a × r_{a'}."""

    base: FinCat
    ranks: Tuple[int, ...]
    actions: Tuple[IntMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        object.__setattr__(self, "actions", tuple(self.actions))
        if len(self.ranks) != self.base.n_objects or len(self.actions) != self.base.n_morphisms:
            raise ValidationError("nombre de rangs ou d'actions incorrect")
        for f, m in enumerate(self.actions):
            shape = (self.ranks[self.base.src[f]], self.ranks[self.base.tgt[f]])
            if m.shape != shape:
                raise ValidationError(f"action de {self.base.mor_names[f]} de forme {m.shape}, attendu {shape}")

    def action(self, f: int) -> IntMatrix:
        return self.actions[f]


@dataclass(frozen=True)
class AbPresheafMap:
    """
    Morphisme de préfaisceaux abéliens ; `components[a]` est r'_a × r_a.

    Avec `check=True` (par défaut), une naturalité violée lève ValidationError.
    """

    source: AbPresheaf
    target: AbPresheaf
    components: Tuple[IntMatrix, ...]
    check: bool = True

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.source.base != self.target.base:
            raise BaseMismatch("morphisme entre préfaisceaux sur des bases différentes")
        if len(self.components) != self.source.base.n_objects:
            raise ValidationError("nombre de composantes incorrect")
        for a, m in enumerate(self.components):
            if m.shape != (self.target.ranks[a], self.source.ranks[a]):
                raise ValidationError(f"composante en {self.source.base.objects[a]} de forme {m.shape}")
        if self.check:
            bad = validate_map(self)
            if bad:
                raise ValidationError("morphisme non naturel", bad)

    def compose(self, first: "AbPresheafMap") -> "AbPresheafMap":
        """self ∘ first."""
        return AbPresheafMap(first.source, self.target,
                             tuple(g @ f for g, f in zip(self.components, first.components)))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_set(x: SetPresheaf) -> List[str]:
    """Identités et contravariance X(g∘f) = X(f)∘X(g), exhaustivement."""
    c = x.base
    out = []
    for a, i in enumerate(c.identity):
        if x.actions[i] != tuple(range(x.size(a))):
            out.append(f"X({c.mor_names[i]}) n'est pas l'identité")
    for (a, b, cc), blk in c.blocks.items():
        for gi, g in enumerate(c.hom(b, cc)):
            act_g = x.actions[g]
            for fi, f in enumerate(c.hom(a, b)):
                act_f = x.actions[f]
                if x.actions[blk[gi, fi]] != tuple(act_f[s] for s in act_g):
                    out.append(f"X({c.mor_names[g]} * {c.mor_names[f]}) != X({c.mor_names[f]})X({c.mor_names[g]})")
                    if len(out) >= 50:
                        return out
    return out


def validate_ab(x: AbPresheaf) -> List[str]:
    """Identités et contravariance X(g∘f) = X(f)·X(g), exhaustivement."""
    c = x.base
    out = []
    for a, i in enumerate(c.identity):
        if x.actions[i] != IntMatrix.identity(x.ranks[a]):
            out.append(f"X({c.mor_names[i]}) n'est pas l'identité")
    for (a, b, cc), blk in c.blocks.items():
        for gi, g in enumerate(c.hom(b, cc)):
            for fi, f in enumerate(c.hom(a, b)):
                if x.actions[blk[gi, fi]] != x.actions[f] @ x.actions[g]:
                    out.append(f"X({c.mor_names[g]} * {c.mor_names[f]}) != X({c.mor_names[f]})X({c.mor_names[g]})")
                    if len(out) >= 50:
                        return out
    return out


def validate_map(f: AbPresheafMap) -> List[str]:
    """Carrés de naturalité φ_a·X(h) = Y(h)·φ_{a'} pour tout h : a → a'."""
    c = f.source.base
    out = []
    for h in range(c.n_morphisms):
        a, a2 = c.src[h], c.tgt[h]
        if f.components[a] @ f.source.actions[h] != f.target.actions[h] @ f.components[a2]:
            out.append(f"carré de naturalité non commutatif en {c.mor_names[h]}")
    return out


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def _columns(act: Sequence[int]) -> Dict[int, Dict[int, int]]:
    data: Dict[int, Dict[int, int]] = {}
    for col, row in enumerate(act):
        data.setdefault(row, {})[col] = 1
    return data


def whitehead(x: SetPresheaf) -> AbPresheaf:
    """Abélianisé ℤ^(X) : rang |X(a)|, matrices 0/1 induites par les actions."""
    c = x.base
    actions = tuple(IntMatrix(x.size(c.src[f]), x.size(c.tgt[f]), _columns(x.actions[f]))
                    for f in range(c.n_morphisms))
    return AbPresheaf(c, tuple(x.size(a) for a in range(c.n_objects)), actions)


def constant_z(c: FinCat) -> AbPresheaf:
    one = IntMatrix.identity(1)
    return AbPresheaf(c, (1,) * c.n_objects, (one,) * c.n_morphisms)


def zero_presheaf(c: FinCat) -> AbPresheaf:
    return AbPresheaf(c, (0,) * c.n_objects, (IntMatrix.zeros(0, 0),) * c.n_morphisms)


def representable(c: FinCat, a: int) -> SetPresheaf:
    """Hom(−, a) ; X(b) = Hom(b, a) et X(f) = précomposition par f."""
    values = tuple(tuple(c.mor_names[s] for s in c.hom(b, a)) for b in range(c.n_objects))
    actions = []
    for f in range(c.n_morphisms):
        b, b2 = c.src[f], c.tgt[f]
        actions.append(tuple(int(c.pos[c.compose(s2, f)]) for s2 in c.hom(b2, a)))
    return SetPresheaf(c, values, tuple(actions))


def terminal_presheaf(c: FinCat) -> SetPresheaf:
    return SetPresheaf(c, (("pt",),) * c.n_objects, ((0,),) * c.n_morphisms)


def empty_presheaf(c: FinCat) -> SetPresheaf:
    return SetPresheaf(c, ((),) * c.n_objects, ((),) * c.n_morphisms)


def coproduct(x: SetPresheaf, y: SetPresheaf) -> SetPresheaf:
    """X ⊔ Y ; les éléments sont préfixés par 0. et 1."""
    if x.base != y.base:
        raise BaseMismatch("coproduit sur des bases différentes")
    c = x.base
    values = tuple(tuple(f"0.{s}" for s in x.values[a]) + tuple(f"1.{s}" for s in y.values[a])
                   for a in range(c.n_objects))
    actions = tuple(x.actions[f] + tuple(x.size(c.src[f]) + s for s in y.actions[f])
                    for f in range(c.n_morphisms))
    return SetPresheaf(c, values, actions)


def set_product(x: SetPresheaf, y: SetPresheaf) -> SetPresheaf:
    """X × Y objet par objet."""
    if x.base != y.base:
        raise BaseMismatch("produit sur des bases différentes")
    c = x.base
    values = tuple(tuple(f"({s}|{t})" for s in x.values[a] for t in y.values[a]) for a in range(c.n_objects))
    actions = []
    for f in range(c.n_morphisms):
        ny = y.size(c.src[f])
        actions.append(tuple(sx * ny + sy for sx in x.actions[f] for sy in y.actions[f]))
    return SetPresheaf(c, values, tuple(actions))


def restrict_set(u: FinFunctor, y: SetPresheaf) -> SetPresheaf:
    """u*Y = Y∘u."""
    if y.base != u.cod:
        raise BaseMismatch("restriction le long d'un foncteur de but différent")
    return SetPresheaf(u.dom, tuple(y.values[b] for b in u.obj_map), tuple(y.actions[m] for m in u.mor_map))


def restrict_ab(u: FinFunctor, y: AbPresheaf) -> AbPresheaf:
    """(u*)^ab Y = Y∘u."""
    if y.base != u.cod:
        raise BaseMismatch("restriction le long d'un foncteur de but différent")
    return AbPresheaf(u.dom, tuple(y.ranks[b] for b in u.obj_map), tuple(y.actions[m] for m in u.mor_map))


def restrict_map(u: FinFunctor, f: AbPresheafMap) -> AbPresheafMap:
    return AbPresheafMap(restrict_ab(u, f.source), restrict_ab(u, f.target),
                         tuple(f.components[b] for b in u.obj_map))


def external_product(x: AbPresheaf, y: AbPresheaf) -> AbPresheaf:
    """X ⊠ Y sur A × B : rangs multipliés, actions par produit de Kronecker."""
    base = product(x.base, y.base)
    ranks = tuple(rx * ry for rx in x.ranks for ry in y.ranks)
    actions = tuple(mx.kron(my) for mx in x.actions for my in y.actions)
    return AbPresheaf(base, ranks, actions)


def direct_sum(x: AbPresheaf, y: AbPresheaf) -> AbPresheaf:
    if x.base != y.base:
        raise BaseMismatch("somme directe sur des bases différentes")
    return AbPresheaf(x.base, tuple(a + b for a, b in zip(x.ranks, y.ranks)),
                      tuple(IntMatrix.block_diag(a, b) for a, b in zip(x.actions, y.actions)))


def identity_map(x: AbPresheaf) -> AbPresheafMap:
    return AbPresheafMap(x, x, tuple(IntMatrix.identity(r) for r in x.ranks))


def zero_map(x: AbPresheaf, y: AbPresheaf) -> AbPresheafMap:
    return AbPresheafMap(x, y, tuple(IntMatrix.zeros(ry, rx) for rx, ry in zip(x.ranks, y.ranks)))


def conjugate(x: AbPresheaf, changes: Sequence[IntMatrix]) -> Tuple[AbPresheaf, AbPresheafMap]:
    """
    Transporte X le long de changements de base unimodulaires P_a.

    Returns:
        Le préfaisceau Y(f) = P_a X(f) P_{a'}^{-1} et l'isomorphisme X → Y.
    """
    c = x.base
    inverses = [left_inverse(p) for p in changes]
    actions = tuple(changes[c.src[f]] @ x.actions[f] @ inverses[c.tgt[f]] for f in range(c.n_morphisms))
    y = AbPresheaf(c, x.ranks, actions)
    return y, AbPresheafMap(x, y, tuple(changes))


# ---------------------------------------------------------------------------
# Colimite
# ---------------------------------------------------------------------------

def offsets(ranks: Sequence[int]) -> List[int]:
    out, acc = [], 0
    for r in ranks:
        out.append(acc)
        acc += r
    return out


def colim_presentation(x: AbPresheaf) -> IntMatrix:
    """
    Présentation de colim X : lignes ⊕_a ℤ^{r_a}, une colonne par (f, v) pour
    f : a → a' non identité, v dans la base de ℤ^{r_{a'}}, valant X(f)v en a
    moins v en a'.
    """
    c = x.base
    off = offsets(x.ranks)
    entries: Dict[Tuple[int, int], int] = {}
    col = 0
    for f in range(c.n_morphisms):
        if c.is_identity(f):
            continue
        a, a2 = c.src[f], c.tgt[f]
        cols = x.actions[f].T
        for v in range(x.ranks[a2]):
            for i, val in cols.row(v).items():
                key = (off[a] + i, col)
                entries[key] = entries.get(key, 0) + val
            key = (off[a2] + v, col)
            entries[key] = entries.get(key, 0) - 1
            col += 1
    return IntMatrix.from_dict(sum(x.ranks), col, entries)


def colim_ab(x: AbPresheaf) -> FgAbGroup:
    return cokernel(colim_presentation(x))
