"""
Catégories finies données par leur table de composition totale.

Les composés sont rangés par blocs : pour chaque triplet d'objets (a, b, c)
tel que Hom(a, b) et Hom(b, c) sont non vides, `blocks[(a, b, c)]` est un
tableau numpy de forme (|Hom(b, c)|, |Hom(a, b)|) dont l'entrée [g, f] est
l'indice global de g∘f (−1 si non défini). Les positions locales sont
données par `pos`. Ce rangement permet de vérifier l'associativité et la
fonctorialité par blocs vectorisés.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import TYPE_CHECKING, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from src.core.errors import NotAGroup, NotAntisymmetric, NotComposable, ValidationError

if TYPE_CHECKING:
    from src.core.presheaf import SetPresheaf

logger = logging.getLogger(__name__)

MAX_VIOLATIONS = 50
_CHUNK = 4_000_000

ComposeRule = Union[Mapping[Tuple[int, int], int], Callable[[int, int], Optional[int]]]


def is_token(name: str) -> bool:
    """Nom utilisable dans le format d'échange."""
    return bool(name) and name != "->" and not any(ch.isspace() or ch in ":=,{}" for ch in name)


class FinCat:
    """
    Catégorie finie.

    Args:
        objects: noms des objets.
        morphisms: triplets (nom, indice source, indice but).
        identity: indice du morphisme identité de chaque objet.
        compose: table {(g, f): g∘f} ou règle g, f -> g∘f (None si non défini).
        boundary: objets situés sur le bord d'une troncature.
        infer_identities: complète la table par les lois d'identité.
    """

    def __init__(self, objects: Sequence[str], morphisms: Sequence[Tuple[str, int, int]],
                 identity: Sequence[int], compose: ComposeRule, boundary: Iterable[int] = (),
                 name: str = "", infer_identities: bool = True):
        self._setup(tuple(objects), tuple(m[0] for m in morphisms),
                    tuple(int(m[1]) for m in morphisms), tuple(int(m[2]) for m in morphisms),
                    tuple(int(i) for i in identity), boundary, name)
        if callable(compose):
            rule = compose
        else:
            table = dict(compose)
            ids = self.identity

            def rule(g: int, f: int) -> Optional[int]:
                h = table.get((g, f))
                if h is None and infer_identities:
                    if g == ids[self.tgt[f]]:
                        return f
                    if f == ids[self.src[g]]:
                        return g
                return h
        self.blocks = self._tabulate(rule)

    @classmethod
    def from_blocks(cls, objects, mor_names, src, tgt, identity, blocks, boundary=(), name="") -> "FinCat":
        cat = cls.__new__(cls)
        cat._setup(tuple(objects), tuple(mor_names), tuple(src), tuple(tgt), tuple(identity), boundary, name)
        cat.blocks = blocks
        return cat

    def _setup(self, objects, mor_names, src, tgt, identity, boundary, name):
        n = len(objects)
        if len(set(objects)) != n:
            raise ValidationError("noms d'objets dupliqués")
        if len(set(mor_names)) != len(mor_names):
            raise ValidationError("noms de morphismes dupliqués")
        bad = [x for x in objects + mor_names if not is_token(x)]
        if bad:
            raise ValidationError("noms invalides", [repr(x) for x in bad])
        if len(identity) != n:
            raise ValidationError(f"{len(identity)} identités pour {n} objets")
        if any(not 0 <= i < n for i in src + tgt) or any(not 0 <= i < len(mor_names) for i in identity):
            raise ValidationError("indice hors bornes dans la description des morphismes")
        self.name = name
        self.objects: Tuple[str, ...] = objects
        self.mor_names: Tuple[str, ...] = mor_names
        self.src: Tuple[int, ...] = src
        self.tgt: Tuple[int, ...] = tgt
        self.identity: Tuple[int, ...] = identity
        self.boundary = frozenset(int(b) for b in boundary)
        self.obj_index = {x: i for i, x in enumerate(objects)}
        self.mor_index = {x: i for i, x in enumerate(mor_names)}
        homs: Dict[Tuple[int, int], List[int]] = {}
        for m, (s, t) in enumerate(zip(src, tgt)):
            homs.setdefault((s, t), []).append(m)
        self.homs: Dict[Tuple[int, int], Tuple[int, ...]] = {k: tuple(v) for k, v in homs.items()}
        self.pos = np.zeros(len(mor_names), dtype=np.int64)
        for ms in self.homs.values():
            self.pos[list(ms)] = np.arange(len(ms))
        self.src_arr = np.asarray(src, dtype=np.int64)
        self.tgt_arr = np.asarray(tgt, dtype=np.int64)
        self.succ: Dict[int, Tuple[int, ...]] = {a: () for a in range(n)}
        for (a, b) in sorted(self.homs):
            self.succ[a] = self.succ[a] + (b,)

    def _tabulate(self, rule: Callable[[int, int], Optional[int]]) -> Dict[Tuple[int, int, int], np.ndarray]:
        blocks = {}
        for (a, b), fs in self.homs.items():
            for c in self.succ[b]:
                gs = self.homs[(b, c)]
                blk = np.full((len(gs), len(fs)), -1, dtype=np.int64)
                for gi, g in enumerate(gs):
                    for fi, f in enumerate(fs):
                        h = rule(g, f)
                        if h is not None:
                            blk[gi, fi] = h
                blocks[(a, b, c)] = blk
        return blocks

    # --- accès ---

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.mor_names)

    def hom(self, a: int, b: int) -> Tuple[int, ...]:
        return self.homs.get((a, b), ())

    def is_identity(self, m: int) -> bool:
        return self.identity[self.src[m]] == m

    def compose(self, g: int, f: int) -> int:
        """g∘f."""
        if self.tgt[f] != self.src[g]:
            raise NotComposable(f"{self.mor_names[g]}∘{self.mor_names[f]}: but et source différents")
        h = int(self.blocks[(self.src[f], self.tgt[f], self.tgt[g])][self.pos[g], self.pos[f]])
        if h < 0:
            raise NotComposable(f"{self.mor_names[g]}∘{self.mor_names[f]} non défini")
        return h

    def composable_pairs(self) -> int:
        return sum(b.size for b in self.blocks.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinCat):
            return NotImplemented
        if (self.objects, self.mor_names, self.src, self.tgt, self.identity, self.boundary) != \
                (other.objects, other.mor_names, other.src, other.tgt, other.identity, other.boundary):
            return False
        return self.blocks.keys() == other.blocks.keys() and all(
            np.array_equal(v, other.blocks[k]) for k, v in self.blocks.items())

    def __hash__(self) -> int:
        return hash((self.objects, self.mor_names))

    def __repr__(self) -> str:
        return f"FinCat({self.name or '?'}: {self.n_objects} objets, {self.n_morphisms} morphismes)"


def _cap(violations: List[str], extra: Iterable[str]) -> bool:
    for v in extra:
        if len(violations) >= MAX_VIOLATIONS:
            return False
        violations.append(v)
    return len(violations) < MAX_VIOLATIONS


def validate(c: FinCat) -> List[str]:
    """Vérifie exhaustivement les axiomes ; renvoie la liste des violations."""
    out: List[str] = []
    names = c.mor_names
    for a, i in enumerate(c.identity):
        if c.src[i] != a or c.tgt[i] != a:
            out.append(f"identité {names[i]} de {c.objects[a]} n'est pas un endomorphisme de {c.objects[a]}")
    if out:
        return out

    for (a, b, cc), blk in c.blocks.items():
        gs, fs = c.hom(b, cc), c.hom(a, b)
        for gi, fi in np.argwhere(blk < 0):
            if not _cap(out, [f"composé non défini: {names[gs[gi]]} * {names[fs[fi]]}"]):
                return out
        ok = blk >= 0
        wrong = ok & ((c.src_arr[np.where(ok, blk, 0)] != a) | (c.tgt_arr[np.where(ok, blk, 0)] != cc))
        for gi, fi in np.argwhere(wrong):
            h = blk[gi, fi]
            if not _cap(out, [f"composé {names[gs[gi]]} * {names[fs[fi]]} = {names[h]} "
                              f"n'a pas la bonne source ou le bon but"]):
                return out
    if out:
        return out

    for (a, b), fs in c.homs.items():
        arr = np.asarray(fs)
        left = c.blocks[(a, b, b)][c.pos[c.identity[b]], :]
        right = c.blocks[(a, a, b)][:, c.pos[c.identity[a]]]
        for k in np.flatnonzero(left != arr):
            _cap(out, [f"identité à gauche: {names[c.identity[b]]} * {names[fs[k]]} = {names[left[k]]}"])
        for k in np.flatnonzero(right != arr):
            _cap(out, [f"identité à droite: {names[fs[k]]} * {names[c.identity[a]]} = {names[right[k]]}"])
    if out:
        return out

    checked = 0
    for (a, b, cc), gf in c.blocks.items():
        p_gf = c.pos[gf]
        for d in c.succ[cc]:
            hg = c.blocks[(b, cc, d)]
            h_gf = c.blocks[(a, cc, d)]
            hg_f = c.blocks[(a, b, d)]
            p_hg = c.pos[hg]
            step = max(1, _CHUNK // max(1, gf.size))
            for start in range(0, hg.shape[0], step):
                left = h_gf[start:start + step][:, p_gf]
                right = hg_f[p_hg[start:start + step], :]
                checked += left.size
                for hi, gi, fi in np.argwhere(left != right):
                    h = c.hom(cc, d)[start + hi]
                    g = c.hom(b, cc)[gi]
                    f = c.hom(a, b)[fi]
                    if not _cap(out, [f"associativité: ({names[h]}, {names[g]}, {names[f]})"]):
                        return out
    logger.debug("associativité vérifiée sur %d triplets de %r", checked, c)
    return out


# ---------------------------------------------------------------------------
# Foncteurs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinFunctor:
    """Foncteur entre catégories finies, donné par ses applications d'indices."""

    dom: FinCat
    cod: FinCat
    obj_map: Tuple[int, ...]
    mor_map: Tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "obj_map", tuple(int(x) for x in self.obj_map))
        object.__setattr__(self, "mor_map", tuple(int(x) for x in self.mor_map))

    def __repr__(self) -> str:
        return f"FinFunctor({self.name or '?'}: {self.dom!r} -> {self.cod!r})"


def validate_functor(u: FinFunctor) -> List[str]:
    """Vérifie exhaustivement sources, buts, identités et composition."""
    dom, cod = u.dom, u.cod
    if len(u.obj_map) != dom.n_objects or len(u.mor_map) != dom.n_morphisms:
        return ["tailles des applications d'objets ou de morphismes incorrectes"]
    if any(not 0 <= x < cod.n_objects for x in u.obj_map) or any(not 0 <= x < cod.n_morphisms for x in u.mor_map):
        return ["image hors de la catégorie but"]
    out: List[str] = []
    om = np.asarray(u.obj_map, dtype=np.int64)
    mm = np.asarray(u.mor_map, dtype=np.int64)
    bad = np.flatnonzero((cod.src_arr[mm] != om[dom.src_arr]) | (cod.tgt_arr[mm] != om[dom.tgt_arr]))
    _cap(out, (f"{dom.mor_names[m]} ↦ {cod.mor_names[mm[m]]}: source ou but non respecté" for m in bad))
    for a, i in enumerate(dom.identity):
        if u.mor_map[i] != cod.identity[u.obj_map[a]]:
            _cap(out, [f"identité de {dom.objects[a]} non préservée"])
    if out:
        return out
    for (a, b, c), blk in dom.blocks.items():
        gs, fs = dom.hom(b, c), dom.hom(a, b)
        target = cod.blocks[(u.obj_map[a], u.obj_map[b], u.obj_map[c])]
        expected = target[np.ix_(cod.pos[mm[list(gs)]], cod.pos[mm[list(fs)]])]
        for gi, fi in np.argwhere(mm[blk] != expected):
            if not _cap(out, [f"composition non préservée: {dom.mor_names[gs[gi]]} * {dom.mor_names[fs[fi]]}"]):
                return out
    return out


def is_faithful(u: FinFunctor) -> bool:
    return all(len({u.mor_map[m] for m in ms}) == len(ms) for ms in u.dom.homs.values())


def is_full(u: FinFunctor) -> bool:
    dom, cod = u.dom, u.cod
    for a in range(dom.n_objects):
        for b in range(dom.n_objects):
            image = {u.mor_map[m] for m in dom.hom(a, b)}
            if len(image) != len(cod.hom(u.obj_map[a], u.obj_map[b])):
                return False
    return True


def isomorphism_violations(u: FinFunctor) -> List[str]:
    """Vérifie que u est un isomorphisme de catégories (bijection explicite)."""
    out = validate_functor(u)
    if len(set(u.obj_map)) != u.cod.n_objects or u.dom.n_objects != u.cod.n_objects:
        out.append("pas une bijection sur les objets")
    if len(set(u.mor_map)) != u.cod.n_morphisms or u.dom.n_morphisms != u.cod.n_morphisms:
        out.append("pas une bijection sur les morphismes")
    return out


def functor_by_names(dom: FinCat, cod: FinCat, rename: Callable[[str], str] = lambda s: s,
                     name: str = "") -> FinFunctor:
    """Foncteur défini par correspondance des noms (après `rename`)."""
    try:
        objs = tuple(cod.obj_index[rename(x)] for x in dom.objects)
        mors = tuple(cod.mor_index[rename(x)] for x in dom.mor_names)
    except KeyError as exc:
        raise ValidationError(f"nom sans correspondant: {exc.args[0]}") from exc
    return FinFunctor(dom, cod, objs, mors, name)


def identity_functor(c: FinCat) -> FinFunctor:
    return FinFunctor(c, c, tuple(range(c.n_objects)), tuple(range(c.n_morphisms)), f"id_{c.name}")


def compose_functors(v: FinFunctor, u: FinFunctor) -> FinFunctor:
    """v∘u."""
    if u.cod != v.dom:
        raise NotComposable(f"{v!r} ∘ {u!r}")
    return FinFunctor(u.dom, v.cod, tuple(v.obj_map[x] for x in u.obj_map),
                      tuple(v.mor_map[m] for m in u.mor_map), f"{v.name}∘{u.name}")


def terminal_functor(c: FinCat) -> FinFunctor:
    e = terminal_category()
    return FinFunctor(c, e, (0,) * c.n_objects, (0,) * c.n_morphisms, f"{c.name}->e")


def object_functor(c: FinCat, a: int) -> FinFunctor:
    """Le foncteur e → c qui choisit l'objet a."""
    return FinFunctor(terminal_category(), c, (a,), (c.identity[a],), f"e->{c.objects[a]}")


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def opposite(c: FinCat) -> FinCat:
    """Catégorie opposée ; mêmes noms, involution exacte."""
    blocks = {(cc, b, a): np.ascontiguousarray(blk.T) for (a, b, cc), blk in c.blocks.items()}
    blocks = dict(sorted(blocks.items()))
    return FinCat.from_blocks(c.objects, c.mor_names, c.tgt, c.src, c.identity, blocks,
                              c.boundary, f"op({c.name})" if not c.name.startswith("op(") else c.name[3:-1])


def product(a: FinCat, b: FinCat) -> FinCat:
    """Produit A × B ; le morphisme (f, g) a l'indice f·|Mor B| + g."""
    nb_obj, nb_mor = b.n_objects, b.n_morphisms
    objects = [f"({x}|{y})" for x in a.objects for y in b.objects]
    names, src, tgt = [], [], []
    for f in range(a.n_morphisms):
        for g in range(nb_mor):
            names.append(f"({a.mor_names[f]}|{b.mor_names[g]})")
            src.append(a.src[f] * nb_obj + b.src[g])
            tgt.append(a.tgt[f] * nb_obj + b.tgt[g])
    identity = [a.identity[x] * nb_mor + b.identity[y] for x in range(a.n_objects) for y in range(nb_obj)]
    blocks = {}
    for (a1, b1, c1), ba in a.blocks.items():
        for (a2, b2, c2), bb in b.blocks.items():
            blk = ba[:, None, :, None] * nb_mor + bb[None, :, None, :]
            blk = blk.reshape(ba.shape[0] * bb.shape[0], ba.shape[1] * bb.shape[1])
            blocks[(a1 * nb_obj + a2, b1 * nb_obj + b2, c1 * nb_obj + c2)] = blk
    boundary = {x * nb_obj + y for x in range(a.n_objects) for y in range(nb_obj)
                if x in a.boundary or y in b.boundary}
    return FinCat.from_blocks(objects, names, src, tgt, identity, blocks, boundary,
                              f"{a.name}x{b.name}")


def projection_functor(a: FinCat, b: FinCat, side: int) -> FinFunctor:
    """Projection A × B → A (side=0) ou → B (side=1)."""
    ab = product(a, b)
    nbo, nbm = b.n_objects, b.n_morphisms
    if side == 0:
        return FinFunctor(ab, a, tuple(i // nbo for i in range(ab.n_objects)),
                          tuple(m // nbm for m in range(ab.n_morphisms)), "pr0")
    return FinFunctor(ab, b, tuple(i % nbo for i in range(ab.n_objects)),
                      tuple(m % nbm for m in range(ab.n_morphisms)), "pr1")


def product_functor(u: FinFunctor, v: FinFunctor, dom: Optional[FinCat] = None,
                    cod: Optional[FinCat] = None) -> FinFunctor:
    """u × v : A × B → C × D."""
    dom = dom or product(u.dom, v.dom)
    cod = cod or product(u.cod, v.cod)
    nbo, nbm = v.dom.n_objects, v.dom.n_morphisms
    ndo, ndm = v.cod.n_objects, v.cod.n_morphisms
    objs = tuple(u.obj_map[i // nbo] * ndo + v.obj_map[i % nbo] for i in range(dom.n_objects))
    mors = tuple(u.mor_map[m // nbm] * ndm + v.mor_map[m % nbm] for m in range(dom.n_morphisms))
    return FinFunctor(dom, cod, objs, mors, f"{u.name}x{v.name}")


def diagonal_functor(c: FinCat) -> FinFunctor:
    """A → A × A."""
    cc = product(c, c)
    return FinFunctor(c, cc, tuple(a * c.n_objects + a for a in range(c.n_objects)),
                      tuple(m * c.n_morphisms + m for m in range(c.n_morphisms)), f"diag_{c.name}")


def power(c: FinCat, n: int) -> FinCat:
    """c^n ; c^0 = e et c^(n) = c × c^(n−1)."""
    if n == 0:
        return terminal_category()
    if n == 1:
        return c
    return product(c, power(c, n - 1))


def _indexed_category(objects, entries, identity_key, compose_key, boundary, name):
    # entries : liste (nom, source, but, clé) ; compose_key(G, F) -> clé du composé.
    index = {key: i for i, (_, _, _, key) in enumerate(entries)}
    morphisms = [(n, s, t) for n, s, t, _ in entries]
    identity = [index[k] for k in identity_key]

    def rule(g: int, f: int) -> Optional[int]:
        return index.get(compose_key(entries[g][3], entries[f][3]))
    return FinCat(objects, morphisms, identity, rule, boundary=boundary, name=name)


def slice_over(u: FinFunctor, b: int) -> Tuple[FinCat, FinFunctor]:
    """
    Catégorie A/b des paires (a, f : u a → b).

    Un morphisme (a, f) → (a', f') est un g : a → a' tel que f'∘u(g) = f.

    Returns:
        La catégorie et la projection vers A.
    """
    dom, cod = u.dom, u.cod
    mm = np.asarray(u.mor_map, dtype=np.int64)
    objects, obj_key = [], {}
    for a in range(dom.n_objects):
        for f in cod.hom(u.obj_map[a], b):
            obj_key[(a, f)] = len(objects)
            objects.append((a, f))
    entries = []
    for (a, a2), gs in sorted(dom.homs.items()):
        fs2 = cod.hom(u.obj_map[a2], b)
        if not fs2:
            continue
        blk = cod.blocks[(u.obj_map[a], u.obj_map[a2], b)]
        sources = blk[:, cod.pos[mm[list(gs)]]]
        for fi, f2 in enumerate(fs2):
            for gi, g in enumerate(gs):
                f = int(sources[fi, gi])
                entries.append((f"({dom.mor_names[g]}|{cod.mor_names[f2]})",
                                obj_key[(a, f)], obj_key[(a2, f2)], (g, f2)))
    entries.sort(key=lambda e: (e[1], e[2], e[3][0], e[3][1]))
    names = [f"({dom.objects[a]}|{cod.mor_names[f]})" for a, f in objects]
    identity_key = [(dom.identity[a], f) for a, f in objects]

    def compose_key(gk, fk):
        return dom.compose(gk[0], fk[0]), gk[1]
    boundary = [i for i, (a, _) in enumerate(objects) if a in dom.boundary]
    cat = _indexed_category(names, entries, identity_key, compose_key, boundary,
                            f"{dom.name}/{cod.objects[b]}")
    proj = FinFunctor(cat, dom, tuple(a for a, _ in objects), tuple(e[3][0] for e in entries),
                      f"pr_{cat.name}")
    logger.debug("tranche %s: %d objets, %d morphismes", cat.name, cat.n_objects, cat.n_morphisms)
    return cat, proj


def category_of_elements(x: "SetPresheaf") -> Tuple[FinCat, FinFunctor]:
    """
    Catégorie des éléments : paires (a, s ∈ X(a)), morphismes f : a → a'
    avec X(f)(s') = s.
    """
    base = x.base
    objects, obj_key = [], {}
    for a in range(base.n_objects):
        for s in range(len(x.values[a])):
            obj_key[(a, s)] = len(objects)
            objects.append((a, s))
    entries = []
    for f in range(base.n_morphisms):
        a, a2 = base.src[f], base.tgt[f]
        for s2, s in enumerate(x.actions[f]):
            entries.append((f"({base.mor_names[f]}|{x.values[a2][s2]})",
                            obj_key[(a, s)], obj_key[(a2, s2)], (f, s2)))
    entries.sort(key=lambda e: (e[1], e[2], e[3][0]))
    names = [f"({base.objects[a]}|{x.values[a][s]})" for a, s in objects]
    identity_key = [(base.identity[a], s) for a, s in objects]

    def compose_key(gk, fk):
        return base.compose(gk[0], fk[0]), gk[1]
    boundary = [i for i, (a, _) in enumerate(objects) if a in base.boundary]
    cat = _indexed_category(names, entries, identity_key, compose_key, boundary, f"el({base.name})")
    proj = FinFunctor(cat, base, tuple(a for a, _ in objects), tuple(e[3][0] for e in entries),
                      f"pr_{cat.name}")
    return cat, proj


# ---------------------------------------------------------------------------
# Catégories de base
# ---------------------------------------------------------------------------

def monotone_maps(i: int, j: int) -> List[Tuple[int, ...]]:
    """Applications croissantes [i] → [j], en ordre lexicographique."""
    return list(combinations_with_replacement(range(j + 1), i + 1))


def delta_maps(k: int) -> List[Tuple[int, int, Tuple[int, ...]]]:
    """Morphismes de Δ_{≤k} dans leur ordre d'indexation : (i, j, suite de valeurs)."""
    return [(i, j, seq) for i in range(k + 1) for j in range(k + 1) for seq in monotone_maps(i, j)]


def delta_name(i: int, j: int, seq: Sequence[int]) -> str:
    return f"d{i}>d{j}[{'.'.join(map(str, seq))}]"


def build_delta_trunc(k: int) -> FinCat:
    """Δ_{≤k} : objets Δ_0 … Δ_k, morphismes les applications croissantes."""
    if k < 0:
        raise ValidationError("troncature négative")
    maps = delta_maps(k)
    index = {(i, seq): m for m, (i, _, seq) in enumerate(maps)}
    identity = [index[(i, tuple(range(i + 1)))] for i in range(k + 1)]

    def rule(g: int, f: int) -> Optional[int]:
        fi, _, fs = maps[f]
        gs = maps[g][2]
        return index[(fi, tuple(gs[x] for x in fs))]
    morphisms = [(delta_name(i, j, seq), i, j) for i, j, seq in maps]
    cat = FinCat([f"d{i}" for i in range(k + 1)], morphisms, identity, rule, boundary=[k],
                 name=f"delta{k}")
    logger.debug("Δ_≤%d: %d morphismes", k, cat.n_morphisms)
    return cat


def build_group_cat(mult: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None,
                    name: str = "BG") -> FinCat:
    """
    Groupoïde à un objet BG.

    Args:
        mult: table mult[g][h] = g·h ; le composé g∘h vaut g·h.
        names: noms des éléments (g0, g1, … par défaut).
    """
    n = len(mult)
    if n == 0 or any(len(row) != n for row in mult):
        raise NotAGroup("table de multiplication non carrée ou vide")
    if any(not 0 <= x < n for row in mult for x in row):
        raise NotAGroup("valeur hors de l'ensemble")
    table = np.asarray(mult, dtype=np.int64)
    # (gh)k contre g(hk)
    assoc = table[table[:, :, None], np.arange(n)[None, None, :]]
    assoc2 = table[np.arange(n)[:, None, None], table[None, :, :]]
    if not np.array_equal(assoc, assoc2):
        raise NotAGroup("multiplication non associative")
    units = [e for e in range(n) if np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n))]
    if not units:
        raise NotAGroup("pas d'élément neutre")
    e = units[0]
    if any(e not in table[g] for g in range(n)) or any(e not in table[:, g] for g in range(n)):
        raise NotAGroup("élément sans inverse")
    names = list(names) if names is not None else [f"g{i}" for i in range(n)]
    if len(names) != n:
        raise NotAGroup(f"{len(names)} noms pour {n} éléments")
    return FinCat(["*"], [(x, 0, 0) for x in names], [e], lambda g, f: int(table[g, f]), name=name)


def cyclic_group_table(n: int) -> List[List[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def build_poset(elements: Union[int, Sequence[str]], relation: Iterable[Tuple], name: str = "P") -> FinCat:
    """
    Poset engendré par une relation, après clôture réflexive-transitive.

    Args:
        elements: nombre d'éléments ou leurs noms.
        relation: paires (a, b) signifiant a ≤ b (indices ou noms).
    """
    names = [str(i) for i in range(elements)] if isinstance(elements, int) else list(elements)
    idx = {x: i for i, x in enumerate(names)}
    g = nx.DiGraph()
    g.add_nodes_from(range(len(names)))
    for a, b in relation:
        g.add_edge(a if isinstance(a, int) else idx[a], b if isinstance(b, int) else idx[b])
    closure = nx.transitive_closure(g, reflexive=True)
    pairs = sorted(closure.edges())
    for a, b in pairs:
        if a != b and closure.has_edge(b, a):
            raise NotAntisymmetric(f"{names[a]} ≤ {names[b]} et {names[b]} ≤ {names[a]}")
    index = {p: m for m, p in enumerate(pairs)}
    morphisms = [(f"id_{names[a]}" if a == b else f"{names[a]}<{names[b]}", a, b) for a, b in pairs]
    identity = [index[(a, a)] for a in range(len(names))]

    def rule(g_: int, f: int) -> Optional[int]:
        return index.get((pairs[f][0], pairs[g_][1]))
    return FinCat(names, morphisms, identity, rule, name=name)


def terminal_category() -> FinCat:
    return FinCat(["*"], [("id_*", 0, 0)], [0], {}, name="e")


def discrete_category(names: Sequence[str], name: str = "discrete") -> FinCat:
    return FinCat(list(names), [(f"id_{x}", i, i) for i, x in enumerate(names)],
                  list(range(len(names))), {}, name=name)


# ---------------------------------------------------------------------------
# Propriétés
# ---------------------------------------------------------------------------

def terminal_objects(c: FinCat) -> List[int]:
    return [t for t in range(c.n_objects) if all(len(c.hom(a, t)) == 1 for a in range(c.n_objects))]


def connected_components(c: FinCat) -> List[List[int]]:
    g = nx.Graph()
    g.add_nodes_from(range(c.n_objects))
    g.add_edges_from(zip(c.src, c.tgt))
    return sorted(sorted(comp) for comp in nx.connected_components(g))
