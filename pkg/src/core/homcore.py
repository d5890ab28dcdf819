"""
Produit tensoriel de foncteurs, intégrateurs et homologie des préfaisceaux abéliens.

Le complexe de Bousfield–Kan d'un préfaisceau X sur A a pour générateurs de
degré n les paires ⟨φ, ξ⟩ où φ = (f_1, …, f_n) est une chaîne composable et
ξ un vecteur de base de X(φ(n)). Seule la dernière face change l'objet final
de la chaîne ; c'est donc la seule qui agit sur les coefficients, par X(f_n).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from src.core.errors import BaseMismatch, ValidationError
from src.core.fincat import FinCat, FinFunctor, build_delta_trunc, delta_name, opposite, slice_over
from src.core.presheaf import (AbPresheaf, AbPresheafMap, constant_z, offsets,
                               representable, restrict_ab, restrict_map, whitehead)
from src.core.simplicial import (Simplex, TruncSimpAb, as_presheaf, composable_chains, face_of,
                                 nerve_complex, unnormalized_complex)
from src.core.zlinalg import (ChainComplex, ChainMap, FgAbGroup, IntMatrix, cokernel, homology,
                              is_homology_iso)

logger = logging.getLogger(__name__)

PASS, FAIL, UNCERTIFIED = "PASS", "FAIL", "UNCERTIFIED"


# ---------------------------------------------------------------------------
# Produit tensoriel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TensorResult:
    group: FgAbGroup
    presentation: IntMatrix


def tensor_presentation(x: AbPresheaf, y: AbPresheaf) -> IntMatrix:
    """
    Présentation de X ⊙_A Y (cofin ∫^a X(a) ⊗ Y(a)).

    Lignes : ⊕_a X(a)⊗Y(a). Colonnes : pour chaque f : a → a' non identité,
    X(a')⊗Y(a), avec ξ⊗η ↦ X(f)ξ⊗η − ξ⊗Y(f)η.
    """
    c = x.base
    if y.base != opposite(c):
        raise BaseMismatch(f"Y doit vivre sur op({c.name})")
    blocks = [rx * ry for rx, ry in zip(x.ranks, y.ranks)]
    row_off = offsets(blocks)
    entries: Dict[Tuple[int, int], int] = {}
    col = 0
    for f in range(c.n_morphisms):
        if c.is_identity(f):
            continue
        a, a2 = c.src[f], c.tgt[f]
        width = x.ranks[a2] * y.ranks[a]
        left = x.actions[f].kron(IntMatrix.identity(y.ranks[a]))
        right = IntMatrix.identity(x.ranks[a2]).kron(y.actions[f])
        for i, j, v in left.nonzero():
            key = (row_off[a] + i, col + j)
            entries[key] = entries.get(key, 0) + v
        for i, j, v in right.nonzero():
            key = (row_off[a2] + i, col + j)
            entries[key] = entries.get(key, 0) - v
        col += width
    return IntMatrix.from_dict(sum(blocks), col, entries)


def tensor(x: AbPresheaf, y: AbPresheaf) -> TensorResult:
    p = tensor_presentation(x, y)
    return TensorResult(cokernel(p), p)


def _swap(p: int, q: int) -> IntMatrix:
    # ξ_i⊗η_j (indice i·q + j) ↦ η_j⊗ξ_i (indice j·p + i)
    return IntMatrix(p * q, p * q, {j * p + i: {i * q + j: 1} for i in range(p) for j in range(q)})


def tensor_swap_isomorphism(x: AbPresheaf, y: AbPresheaf) -> Tuple[IntMatrix, IntMatrix]:
    """
    Isomorphisme explicite entre les présentations de X ⊙ Y et Y ⊙ X.

    Returns:
        (G, R) unimodulaires avec P(Y ⊙ X) = G · P(X ⊙ Y) · R.
    """
    c = x.base
    p = tensor_presentation(x, y)
    q = tensor_presentation(y, x)
    g = IntMatrix.block_diag(*(_swap(rx, ry) for rx, ry in zip(x.ranks, y.ranks)))
    r_blocks = []
    for f in range(c.n_morphisms):
        if c.is_identity(f):
            continue
        a, a2 = c.src[f], c.tgt[f]
        # colonnes de Y ⊙ X : Y(a)⊗X(a') ; celles de X ⊙ Y : X(a')⊗Y(a)
        r_blocks.append(_swap(y.ranks[a], x.ranks[a2]).scale(-1))
    r = IntMatrix.block_diag(*r_blocks) if r_blocks else IntMatrix.zeros(0, 0)
    if g @ p @ r != q:
        raise ValidationError("les présentations de X⊙Y et Y⊙X ne se correspondent pas")
    return g, r


# ---------------------------------------------------------------------------
# Complexe de Bousfield–Kan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BkComplex:
    """Remplacement simplicial ⊕_φ X(φ(n)) tronqué en degré `trunc`."""

    base: FinCat
    coeff: AbPresheaf
    trunc: int
    normalized: bool
    chains: Tuple[Tuple[Simplex, ...], ...]
    chain_offsets: Tuple[Tuple[int, ...], ...]
    complex: ChainComplex
    index: Tuple[Dict[Simplex, int], ...] = field(repr=False, compare=False, default=())

    def last_object(self, s: Simplex) -> int:
        return self.base.tgt[s[1][-1]] if s[1] else s[0]


def bk_complex(x: AbPresheaf, n: int, normalized: bool = True) -> BkComplex:
    a = x.base
    levels = composable_chains(a, n, normalized=normalized)
    index = tuple({s: k for k, s in enumerate(level)} for level in levels)

    def last(s: Simplex) -> int:
        return a.tgt[s[1][-1]] if s[1] else s[0]
    offs, ranks = [], []
    for level in levels:
        sizes = [x.ranks[last(s)] for s in level]
        offs.append(tuple(offsets(sizes)))
        ranks.append(sum(sizes))
    diffs = []
    for d in range(1, n + 1):
        entries: Dict[Tuple[int, int], int] = {}
        for k, s in enumerate(levels[d]):
            col0 = offs[d][k]
            r = x.ranks[last(s)]
            if r == 0:
                continue
            for i in range(d + 1):
                target = index[d - 1].get(face_of(a, s, i))
                if target is None:
                    continue
                row0 = offs[d - 1][target]
                sign = -1 if i % 2 else 1
                if i < d:
                    for t in range(r):
                        entries[(row0 + t, col0 + t)] = entries.get((row0 + t, col0 + t), 0) + sign
                else:
                    for ii, jj, v in x.actions[s[1][-1]].nonzero():
                        key = (row0 + ii, col0 + jj)
                        entries[key] = entries.get(key, 0) + sign * v
        diffs.append(IntMatrix.from_dict(ranks[d - 1], ranks[d], entries))
    cplx = ChainComplex(n, tuple(ranks), tuple(diffs))
    logger.debug("complexe de Bousfield-Kan sur %r: rangs %s", a, cplx.ranks)
    return BkComplex(a, x, n, normalized, tuple(tuple(l) for l in levels), tuple(offs), cplx, index)


def presheaf_homology(x: AbPresheaf, n: int, normalized: bool = True,
                      mapper: Callable = map) -> Tuple[FgAbGroup, ...]:
    """H_0 … H_{n−1} de X ; `mapper` permet de répartir les degrés sur des threads."""
    bk = bk_complex(x, n, normalized).complex
    return tuple(mapper(lambda k: homology(bk, k), range(n)))


# ---------------------------------------------------------------------------
# Intégrateurs libres
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeIntegrator:
    """
    Résolution libre tronquée de ℤ sur A^op.

    `generators[n]` liste les objets a_j : L_n = ⊕_j ℤ^(Hom_A(a_j, −)).
    `diffs[n − 1][(i, j)]` est une combinaison {h : coeff} de morphismes
    h : b_i → a_j, b_i le générateur i de degré n − 1. `augmentation[i]` est
    la valeur de ε sur le générateur i de degré 0.
    """

    base: FinCat
    trunc: int
    generators: Tuple[Tuple[int, ...], ...]
    diffs: Tuple[Mapping[Tuple[int, int], Mapping[int, int]], ...]
    augmentation: Tuple[int, ...]
    name: str = ""


def integrate(l: FreeIntegrator, x: AbPresheaf) -> ChainComplex:
    """X ⊙_A L_• ≅ ⊕_j X(a_j), bloc (i, j) de la différentielle Σ_h c_h X(h)."""
    if x.base != l.base:
        raise BaseMismatch("intégrateur et coefficients sur des bases différentes")
    ranks, offs = [], []
    for gens in l.generators:
        o = offsets([x.ranks[a] for a in gens])
        offs.append(o)
        ranks.append(sum(x.ranks[a] for a in gens))
    diffs = []
    for n in range(1, l.trunc + 1):
        entries: Dict[Tuple[int, int], int] = {}
        for (i, j), combo in l.diffs[n - 1].items():
            for h, coeff in combo.items():
                for ii, jj, v in x.actions[h].nonzero():
                    key = (offs[n - 1][i] + ii, offs[n][j] + jj)
                    entries[key] = entries.get(key, 0) + coeff * v
        diffs.append(IntMatrix.from_dict(ranks[n - 1], ranks[n], entries))
    return ChainComplex(l.trunc, tuple(ranks), tuple(diffs))


def validate_integrator(l: FreeIntegrator) -> List[str]:
    """
    Vérifie, en chaque objet c, que L_•(c) → ℤ est une résolution jusqu'au
    degré trunc − 1 : ε∘d_1 = 0, coker d_1 ≅ ℤ, ε surjective, H_n = 0.
    """
    a = l.base
    out = []
    for n, combos in enumerate(l.diffs, start=1):
        for (i, j), combo in combos.items():
            for h in combo:
                if a.src[h] != l.generators[n - 1][i] or a.tgt[h] != l.generators[n][j]:
                    out.append(f"degré {n}: {a.mor_names[h]} n'est pas un morphisme b_{i} → a_{j}")
    if out:
        return out
    for c in range(a.n_objects):
        evaluated = integrate(l, whitehead(representable(a, c)))
        eps = []
        for i, gen in enumerate(l.generators[0]):
            eps.extend([l.augmentation[i]] * len(a.hom(gen, c)))
        eps_row = IntMatrix.from_rows([eps], cols=len(eps))
        name = a.objects[c]
        if l.trunc >= 1 and not (eps_row @ evaluated.diff(1)).is_zero():
            out.append(f"en {name}: ε∘d_1 != 0")
        if not eps or gcd(*eps) != 1:
            out.append(f"en {name}: ε n'est pas surjective")
        h0 = cokernel(evaluated.diff(1)) if l.trunc >= 1 else FgAbGroup(evaluated.ranks[0])
        if not h0.is_z():
            out.append(f"en {name}: H_0 = {h0} au lieu de Z")
        for k in range(1, l.trunc):
            hk = homology(evaluated, k)
            if not hk.is_trivial():
                out.append(f"en {name}: H_{k} = {hk}")
    return out


def bousfield_kan_integrator(a: FinCat, n: int, normalized: bool = True) -> FreeIntegrator:
    """ℓ_A : un générateur par chaîne, placé sur son dernier objet."""
    levels = composable_chains(a, n, normalized=normalized)
    index = [{s: k for k, s in enumerate(level)} for level in levels]

    def last(s: Simplex) -> int:
        return a.tgt[s[1][-1]] if s[1] else s[0]
    diffs = []
    for d in range(1, n + 1):
        combos: Dict[Tuple[int, int], Dict[int, int]] = {}
        for j, s in enumerate(levels[d]):
            for i in range(d + 1):
                t = index[d - 1].get(face_of(a, s, i))
                if t is None:
                    continue
                h = s[1][-1] if i == d else a.identity[last(s)]
                combo = combos.setdefault((t, j), {})
                combo[h] = combo.get(h, 0) + (-1) ** i
        diffs.append({k: {h: v for h, v in combo.items() if v} for k, combo in combos.items()})
    gens = tuple(tuple(last(s) for s in level) for level in levels)
    return FreeIntegrator(a, n, gens, tuple(diffs), (1,) * len(gens[0]), f"BK({a.name})")


def delta_integrator(n: int) -> FreeIntegrator:
    """L_Δ sur Δ_{≤n} : L_k = ℤ^(Hom(Δ_k, −)), différentielle Σ (−1)^i δ^i."""
    delta = build_delta_trunc(n)
    diffs = []
    for k in range(1, n + 1):
        combo = {}
        for i in range(k + 1):
            seq = tuple(x if x < i else x + 1 for x in range(k))
            combo[delta.mor_index[delta_name(k - 1, k, seq)]] = (-1) ** i
        diffs.append({(0, 0): combo})
    return FreeIntegrator(delta, n, tuple((k,) for k in range(n + 1)), tuple(diffs), (1,), "L_Delta")


def delta_integrator_complex(x: TruncSimpAb) -> ChainComplex:
    """
    X ⊙ L_Δ calculé par le produit tensoriel contre ℤ^(Hom(Δ_n, −)).

    La section de Yoneda S_n : X_n → ⊕_a X(a)⊗ℤ^(Hom(Δ_n, a)) et
    l'évaluation E_n en sens inverse donnent D_n = E_{n−1}(1⊗Λ)S_n.
    """
    top = x.trunc
    xp = as_presheaf(x)
    delta = xp.base
    dop = opposite(delta)
    reps = [whitehead(representable(dop, n)) for n in range(top + 1)]
    sections, evaluations = [], []
    for n in range(top + 1):
        res = tensor(xp, reps[n])
        if res.group != FgAbGroup(x.ranks[n]):
            raise ValidationError(f"X ⊙ L_{n} = {res.group}, attendu Z^{x.ranks[n]}")
        blocks = [xp.ranks[a] * reps[n].ranks[a] for a in range(delta.n_objects)]
        off = offsets(blocks)
        total = sum(blocks)
        ident_pos = int(delta.pos[delta.identity[n]])
        width = reps[n].ranks[n]
        sections.append(IntMatrix(total, x.ranks[n], {off[n] + xi * width + ident_pos: {xi: 1}
                                                      for xi in range(x.ranks[n])}))
        entries: Dict[Tuple[int, int], int] = {}
        for a in range(delta.n_objects):
            homs = delta.hom(n, a)
            for t, theta in enumerate(homs):
                for i, xi, v in xp.actions[theta].nonzero():
                    entries[(i, off[a] + xi * len(homs) + t)] = v
        ev = IntMatrix.from_dict(x.ranks[n], total, entries)
        if not (ev @ res.presentation).is_zero():
            raise ValidationError(f"l'évaluation ne tue pas les relations en degré {n}")
        evaluations.append(ev)
    diffs = []
    for n in range(1, top + 1):
        lam_blocks = []
        for a in range(delta.n_objects):
            src, dst = delta.hom(n, a), delta.hom(n - 1, a)
            entries = {}
            for i in range(n + 1):
                cof = delta.mor_index[delta_name(n - 1, n, tuple(v if v < i else v + 1 for v in range(n)))]
                for t, theta in enumerate(src):
                    key = (int(delta.pos[delta.compose(theta, cof)]), t)
                    entries[key] = entries.get(key, 0) + (-1) ** i
            lam = IntMatrix.from_dict(len(dst), len(src), entries)
            lam_blocks.append(IntMatrix.identity(xp.ranks[a]).kron(lam))
        induced = IntMatrix.block_diag(*lam_blocks)
        diffs.append(evaluations[n - 1] @ induced @ sections[n])
    cplx = ChainComplex(top, x.ranks, tuple(diffs))
    if cplx != unnormalized_complex(x):
        raise ValidationError("X ⊙ L_Δ diffère du complexe non normalisé")
    return cplx


# ---------------------------------------------------------------------------
# Morphismes induits
# ---------------------------------------------------------------------------

def _push_chains(u: FinFunctor, source: BkComplex, target: BkComplex) -> ChainMap:
    # ⟨φ, ξ⟩ ↦ ⟨u∘φ, ξ⟩ ; une image dégénérée est nulle en mode normalisé.
    levels = []
    for d in range(source.trunc + 1):
        entries: Dict[Tuple[int, int], int] = {}
        for k, (x0, chain) in enumerate(source.chains[d]):
            image = (u.obj_map[x0], tuple(u.mor_map[f] for f in chain))
            t = target.index[d].get(image)
            if t is None:
                continue
            r = source.coeff.ranks[source.last_object((x0, chain))]
            for i in range(r):
                entries[(target.chain_offsets[d][t] + i, source.chain_offsets[d][k] + i)] = 1
        levels.append(IntMatrix.from_dict(target.complex.ranks[d], source.complex.ranks[d], entries))
    return ChainMap(source.complex, target.complex, tuple(levels))


def induced_hom_map(u: FinFunctor, n: int, normalized: bool = True) -> Tuple[ChainMap, Tuple[bool, ...]]:
    """H(u, ℤ) : bk(ℤ_A) → bk(ℤ_B) et isomorphie degré par degré (0 … n−1)."""
    src = bk_complex(constant_z(u.dom), n, normalized)
    tgt = bk_complex(constant_z(u.cod), n, normalized)
    f = _push_chains(u, src, tgt)
    return f, is_homology_iso(f, n - 1)


def lambda_map(u: FinFunctor, x: AbPresheaf, n: int, normalized: bool = True) -> Tuple[ChainMap, Tuple[bool, ...]]:
    """λ_{u,X} : X ⊙_B ℓ_A^B → X ⊙_B ℓ_B, ⟨φ, ξ⟩ ↦ ⟨u∘φ, ξ⟩."""
    src = bk_complex(restrict_ab(u, x), n, normalized)
    tgt = bk_complex(x, n, normalized)
    f = _push_chains(u, src, tgt)
    return f, is_homology_iso(f, n - 1)


def bk_chain_map(f: AbPresheafMap, n: int, normalized: bool = True) -> ChainMap:
    """bk(X) → bk(Y), ⟨φ, ξ⟩ ↦ ⟨φ, f_{φ(n)} ξ⟩."""
    src = bk_complex(f.source, n, normalized)
    tgt = bk_complex(f.target, n, normalized)
    levels = []
    for d in range(n + 1):
        entries: Dict[Tuple[int, int], int] = {}
        for k, s in enumerate(src.chains[d]):
            comp = f.components[src.last_object(s)]
            for i, j, v in comp.nonzero():
                entries[(tgt.chain_offsets[d][k] + i, src.chain_offsets[d][k] + j)] = v
        levels.append(IntMatrix.from_dict(tgt.complex.ranks[d], src.complex.ranks[d], entries))
    return ChainMap(src.complex, tgt.complex, tuple(levels))


def is_wab_equivalence(f: AbPresheafMap, n: int, normalized: bool = True) -> Tuple[bool, ...]:
    """f induit-il un isomorphisme H_k(A, X) → H_k(A, Y), k < n ?"""
    return is_homology_iso(bk_chain_map(f, n, normalized), n - 1)


def pullback_reflects(u: FinFunctor, f: AbPresheafMap, n: int) -> Tuple[Tuple[bool, ...], Tuple[bool, ...]]:
    """Drapeaux d'isomorphie de f sur B et de (u*)f sur A."""
    return is_wab_equivalence(f, n), is_wab_equivalence(restrict_map(u, f), n)


# ---------------------------------------------------------------------------
# Asphéricité
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SliceVerdict:
    obj: str
    homology: Tuple[FgAbGroup, ...]
    verdict: str
    certified_upto: int
    slice_size: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class AsphericityReport:
    functor: str
    trunc: int
    entries: Tuple[SliceVerdict, ...]

    @property
    def passed(self) -> bool:
        return all(e.verdict != FAIL for e in self.entries)

    def verdicts(self) -> Dict[str, str]:
        return {e.obj: e.verdict for e in self.entries}


def is_point_homology(groups: Sequence[FgAbGroup]) -> bool:
    return bool(groups) and groups[0].is_z() and all(g.is_trivial() for g in groups[1:])


def _verdict(ok: bool, clipped: bool, obj: str) -> str:
    if ok:
        return PASS
    if clipped:
        logger.info("tranche au-dessus de %s coupée par la troncature: non certifiée", obj)
        return UNCERTIFIED
    return FAIL


def check_wab_aspherical(u: FinFunctor, n: int, mapper: Callable = map) -> AsphericityReport:
    """
    Pour chaque objet b : homologie du nerf de A/b en degrés 0 … n−1.

    Un échec sur une tranche contenant des objets du bord de troncature est
    rapporté UNCERTIFIED.
    """
    def one(b: int) -> SliceVerdict:
        cat, _ = slice_over(u, b)
        groups = tuple(homology(nerve_complex(cat, n, normalized=True), k) for k in range(n))
        verdict = _verdict(is_point_homology(groups), bool(cat.boundary), u.cod.objects[b])
        return SliceVerdict(u.cod.objects[b], groups, verdict, n - 1, (cat.n_objects, cat.n_morphisms))
    entries = tuple(mapper(one, range(u.cod.n_objects)))
    return AsphericityReport(u.name, n, entries)


def check_wab_aspherical_via_lambda(u: FinFunctor, n: int, mapper: Callable = map) -> AsphericityReport:
    """Même verdict, obtenu par λ_{u, ℤ^(b)} pour chaque représentable."""
    def one(b: int) -> SliceVerdict:
        x = whitehead(representable(u.cod, b))
        f, flags = lambda_map(u, x, n)
        groups = tuple(homology(f.source, k) for k in range(n))
        clipped = any(a in u.dom.boundary and u.cod.hom(u.obj_map[a], b) for a in range(u.dom.n_objects))
        verdict = _verdict(all(flags), clipped, u.cod.objects[b])
        return SliceVerdict(u.cod.objects[b], groups, verdict, n - 1)
    entries = tuple(mapper(one, range(u.cod.n_objects)))
    return AsphericityReport(u.name, n, entries)
