"""
Groupes abéliens simpliciaux tronqués, nerfs de catégories finies,
complexes normalisé (Moore) et non normalisé, et l'inverse Γ de Dold–Kan.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from src.core.errors import ValidationError
from src.core.fincat import FinCat, build_delta_trunc, delta_maps
from src.core.presheaf import AbPresheaf
from src.core.zlinalg import ChainComplex, ChainMap, IntMatrix, kernel_basis, left_inverse, rank

logger = logging.getLogger(__name__)

Simplex = Tuple[int, Tuple[int, ...]]


# ---------------------------------------------------------------------------
# Nerf
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NerveTrunc:
    """
    Nerf tronqué : en degré n, les chaînes composables (f_1, …, f_n), notées
    (x_0, chaîne). `faces[n][i][k]` est l'indice de d_i du simplexe k,
    `degeneracies[n][j][k]` celui de s_j (pour n < trunc).
    """

    base: FinCat
    trunc: int
    simplices: Tuple[Tuple[Simplex, ...], ...]
    faces: Tuple[Tuple[Tuple[int, ...], ...], ...]
    degeneracies: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def last_object(self, s: Simplex) -> int:
        return self.base.tgt[s[1][-1]] if s[1] else s[0]

    def is_degenerate(self, s: Simplex) -> bool:
        return any(self.base.is_identity(f) for f in s[1])

    def nondegenerate(self, n: int) -> List[int]:
        return [k for k, s in enumerate(self.simplices[n]) if not self.is_degenerate(s)]


def composable_chains(a: FinCat, n: int, normalized: bool = False) -> List[List[Simplex]]:
    """Chaînes de longueur 0..n en ordre lexicographique des indices de morphismes."""
    levels: List[List[Simplex]] = [[(x, ()) for x in range(a.n_objects)]]
    out_of: Dict[int, List[int]] = {x: [] for x in range(a.n_objects)}
    for f in range(a.n_morphisms):
        if not (normalized and a.is_identity(f)):
            out_of[a.src[f]].append(f)
    for k in range(1, n + 1):
        nxt = []
        for x0, chain in levels[-1]:
            last = a.tgt[chain[-1]] if chain else x0
            for f in out_of[last]:
                nxt.append((x0, chain + (f,)))
        levels.append(nxt)
    return levels


def face_of(a: FinCat, s: Simplex, i: int) -> Simplex:
    x0, chain = s
    n = len(chain)
    if i == 0:
        return (a.tgt[chain[0]], chain[1:])
    if i == n:
        return (x0, chain[:-1])
    return (x0, chain[:i - 1] + (a.compose(chain[i], chain[i - 1]),) + chain[i + 1:])


def degeneracy_of(a: FinCat, s: Simplex, j: int) -> Simplex:
    x0, chain = s
    xj = x0 if j == 0 else a.tgt[chain[j - 1]]
    return (x0, chain[:j] + (a.identity[xj],) + chain[j:])


def nerve_trunc(a: FinCat, n: int) -> NerveTrunc:
    levels = composable_chains(a, n)
    index = [{s: k for k, s in enumerate(level)} for level in levels]
    faces, degens = [()], []
    for d in range(1, n + 1):
        faces.append(tuple(tuple(index[d - 1][face_of(a, s, i)] for s in levels[d]) for i in range(d + 1)))
    for d in range(n + 1):
        if d < n:
            degens.append(tuple(tuple(index[d + 1][degeneracy_of(a, s, j)] for s in levels[d])
                                for j in range(d + 1)))
        else:
            degens.append(())
    logger.debug("nerf de %r tronqué en %d: %s simplexes", a, n, [len(l) for l in levels])
    return NerveTrunc(a, n, tuple(tuple(l) for l in levels), tuple(faces), tuple(degens))


def nerve_complex(a: FinCat, n: int, normalized: bool = True) -> ChainComplex:
    """
    Complexe de chaînes du nerf, tronqué en degré n.

    Normalisé : base les chaînes sans identité, les faces tombant sur une
    chaîne dégénérée sont omises.
    """
    levels = composable_chains(a, n, normalized=normalized)
    index = [{s: k for k, s in enumerate(level)} for level in levels]
    diffs = []
    for d in range(1, n + 1):
        entries: Dict[Tuple[int, int], int] = {}
        for col, s in enumerate(levels[d]):
            for i in range(d + 1):
                row = index[d - 1].get(face_of(a, s, i))
                if row is None:
                    continue
                entries[(row, col)] = entries.get((row, col), 0) + (-1) ** i
        diffs.append(IntMatrix.from_dict(len(levels[d - 1]), len(levels[d]), entries))
    return ChainComplex(n, tuple(len(l) for l in levels), tuple(diffs))


# ---------------------------------------------------------------------------
# Groupes abéliens simpliciaux tronqués
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncSimpAb:
    """
    Groupe abélien simplicial tronqué en degré `trunc`.

    `faces[n][i]` : d_i de X_n vers X_{n−1} (vide en degré 0) ;
    `degeneracies[n][j]` : s_j de X_n vers X_{n+1} (vide en degré trunc).
    """

    trunc: int
    ranks: Tuple[int, ...]
    faces: Tuple[Tuple[IntMatrix, ...], ...]
    degeneracies: Tuple[Tuple[IntMatrix, ...], ...]

    def __post_init__(self):
        n = self.trunc
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "faces", tuple(tuple(f) for f in self.faces))
        object.__setattr__(self, "degeneracies", tuple(tuple(s) for s in self.degeneracies))
        if len(self.ranks) != n + 1 or len(self.faces) != n + 1 or len(self.degeneracies) != n + 1:
            raise ValidationError(f"données simpliciales incomplètes pour la troncature {n}")
        for d in range(n + 1):
            if len(self.faces[d]) != (d + 1 if d else 0):
                raise ValidationError(f"{len(self.faces[d])} faces en degré {d}")
            if len(self.degeneracies[d]) != (d + 1 if d < n else 0):
                raise ValidationError(f"{len(self.degeneracies[d])} dégénérescences en degré {d}")
            for m in self.faces[d]:
                if m.shape != (self.ranks[d - 1], self.ranks[d]):
                    raise ValidationError(f"face de forme {m.shape} en degré {d}")
            for m in self.degeneracies[d]:
                if m.shape != (self.ranks[d + 1], self.ranks[d]):
                    raise ValidationError(f"dégénérescence de forme {m.shape} en degré {d}")

    def d(self, n: int, i: int) -> IntMatrix:
        return self.faces[n][i]

    def s(self, n: int, j: int) -> IntMatrix:
        return self.degeneracies[n][j]


def validate_simplicial(x: TruncSimpAb) -> List[str]:
    """Identités simpliciales restant dans les degrés ≤ trunc."""
    out = []
    d, s, top = x.d, x.s, x.trunc

    def check(ok: bool, label: str):
        if not ok:
            out.append(label)

    for n in range(2, top + 1):
        for j in range(n + 1):
            for i in range(j):
                check(d(n - 1, i) @ d(n, j) == d(n - 1, j - 1) @ d(n, i), f"d_{i}d_{j} en degré {n}")
    for n in range(top):
        eye = IntMatrix.identity(x.ranks[n])
        for j in range(n + 1):
            check(d(n + 1, j) @ s(n, j) == eye, f"d_{j}s_{j} != id en degré {n}")
            check(d(n + 1, j + 1) @ s(n, j) == eye, f"d_{j + 1}s_{j} != id en degré {n}")
            for i in range(j):
                if n >= 1:
                    check(d(n + 1, i) @ s(n, j) == s(n - 1, j - 1) @ d(n, i), f"d_{i}s_{j} en degré {n}")
            for i in range(j + 2, n + 2):
                if n >= 1:
                    check(d(n + 1, i) @ s(n, j) == s(n - 1, j) @ d(n, i - 1), f"d_{i}s_{j} en degré {n}")
    for n in range(top - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                check(s(n + 1, i) @ s(n, j) == s(n + 1, j + 1) @ s(n, i), f"s_{i}s_{j} en degré {n}")
    return out


def unnormalized_complex(x: TruncSimpAb) -> ChainComplex:
    """Complexe non normalisé, d = Σ (−1)^i d_i."""
    diffs = []
    for n in range(1, x.trunc + 1):
        acc = IntMatrix.zeros(x.ranks[n - 1], x.ranks[n])
        for i, m in enumerate(x.faces[n]):
            acc = acc + m.scale((-1) ** i)
        diffs.append(acc)
    return ChainComplex(x.trunc, x.ranks, tuple(diffs))


@dataclass(frozen=True)
class MooreComplex:
    """Complexe de Moore, bases de noyaux (colonnes) et inclusion dans le non normalisé."""

    complex: ChainComplex
    bases: Tuple[IntMatrix, ...]
    inclusion: ChainMap


def moore_normalized(x: TruncSimpAb) -> MooreComplex:
    """N_n = ⋂_{i>0} ker d_i, différentielle induite par d_0."""
    bases = [IntMatrix.identity(x.ranks[0])]
    for n in range(1, x.trunc + 1):
        stacked = IntMatrix.vstack(*x.faces[n][1:], cols=x.ranks[n])
        bases.append(kernel_basis(stacked))
    lefts = [left_inverse(k) for k in bases]
    diffs = tuple(lefts[n - 1] @ x.faces[n][0] @ bases[n] for n in range(1, x.trunc + 1))
    cplx = ChainComplex(x.trunc, tuple(k.cols for k in bases), diffs)
    inclusion = ChainMap(cplx, unnormalized_complex(x), tuple(bases))
    return MooreComplex(cplx, tuple(bases), inclusion)


def degenerate_rank(x: TruncSimpAb, n: int) -> int:
    """Rang de la partie dégénérée Σ_j im s_j en degré n."""
    if n == 0:
        return 0
    return rank(IntMatrix.hstack(*x.degeneracies[n - 1], rows=x.ranks[n]))


# ---------------------------------------------------------------------------
# Γ de Dold–Kan
# ---------------------------------------------------------------------------

def surjections(n: int, k: int) -> List[Tuple[int, ...]]:
    """Surjections croissantes [n] ↠ [k], en ordre lexicographique."""
    out = []
    for cuts in combinations(range(1, n + 1), k):
        seq, v = [], 0
        for x in range(n + 1):
            if x in cuts:
                v += 1
            seq.append(v)
        out.append(tuple(seq))
    return sorted(out)


def epi_mono(seq: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Factorisation τ = δ∘ε ; renvoie (ε, δ) en suites de valeurs."""
    image = sorted(set(seq))
    where = {v: i for i, v in enumerate(image)}
    return tuple(where[v] for v in seq), tuple(image)


def _gamma_summands(c: ChainComplex, n: int):
    summands, offset = [], 0
    for k in range(n + 1):
        for sigma in surjections(n, k):
            summands.append((sigma, k, offset))
            offset += c.ranks[k]
    return summands, offset


def _gamma_action(c: ChainComplex, theta: Sequence[int], m: int, n: int, layout) -> IntMatrix:
    # X(θ) : Γ_n → Γ_m pour θ : [m] → [n].
    src, src_rank = layout[n]
    tgt, tgt_rank = layout[m]
    tgt_index = {sigma: off for sigma, _, off in tgt}
    blocks: Dict[Tuple[int, int], int] = {}
    for sigma, k, off in src:
        eps, delta = epi_mono(tuple(sigma[t] for t in theta))
        p = len(delta) - 1
        if p == k:
            piece = IntMatrix.identity(c.ranks[k])
        elif p == k - 1 and delta == tuple(range(1, k + 1)):
            piece = c.diff(k)
        else:
            continue
        row0 = tgt_index[eps]
        for i, j, v in piece.nonzero():
            blocks[(row0 + i, off + j)] = v
    return IntMatrix.from_dict(tgt_rank, src_rank, blocks)


def gamma(c: ChainComplex) -> TruncSimpAb:
    """Γ(C)_n = ⊕_{[n] ↠ [k]} C_k avec les applications structurales de Dold–Kan."""
    top = c.trunc
    layout = [_gamma_summands(c, n) for n in range(top + 1)]
    faces, degens = [()], []
    for n in range(1, top + 1):
        faces.append(tuple(_gamma_action(c, tuple(x if x < i else x + 1 for x in range(n)), n - 1, n, layout)
                           for i in range(n + 1)))
    for n in range(top + 1):
        if n == top:
            degens.append(())
            continue
        degens.append(tuple(_gamma_action(c, tuple(x if x <= j else x - 1 for x in range(n + 2)), n + 1, n, layout)
                            for j in range(n + 1)))
    return TruncSimpAb(top, tuple(r for _, r in layout), tuple(faces), tuple(degens))


def gamma_comparison(c: ChainComplex) -> Tuple[ChainMap, ChainMap, MooreComplex]:
    """
    Isomorphisme explicite C ≅ N(Γ(C)).

    Returns:
        (C → N Γ C, N Γ C → C, complexe de Moore) ; les deux morphismes sont
        vérifiés mutuellement inverses.
    """
    moore = moore_normalized(gamma(c))
    to_levels, from_levels = [], []
    for n in range(c.trunc + 1):
        summands, total = _gamma_summands(c, n)
        ident = tuple(range(n + 1))
        off = next(o for sigma, _, o in summands if sigma == ident)
        r = c.ranks[n]
        inject = IntMatrix(total, r, {off + i: {i: 1} for i in range(r)})
        project = IntMatrix(r, total, {i: {off + i: 1} for i in range(r)})
        to_levels.append(left_inverse(moore.bases[n]) @ inject)
        from_levels.append(project @ moore.bases[n])
    forward = ChainMap(c, moore.complex, tuple(to_levels))
    backward = ChainMap(moore.complex, c, tuple(from_levels))
    if not forward.is_inverse_of(backward):
        raise ValidationError("la comparaison de Dold–Kan n'est pas un isomorphisme")
    return forward, backward, moore


# ---------------------------------------------------------------------------
# Passages vers et depuis les préfaisceaux
# ---------------------------------------------------------------------------

def free_simplicial(nerve: NerveTrunc) -> TruncSimpAb:
    """ℤ^(N A) tronqué."""
    ranks = tuple(len(l) for l in nerve.simplices)

    def index_matrix(rows: int, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix.from_dict(rows, len(idx), {(r, k): 1 for k, r in enumerate(idx)})

    faces = [()] + [tuple(index_matrix(ranks[n - 1], f) for f in nerve.faces[n]) for n in range(1, nerve.trunc + 1)]
    degens = [tuple(index_matrix(ranks[n + 1], s) for s in nerve.degeneracies[n]) for n in range(nerve.trunc + 1)]
    return TruncSimpAb(nerve.trunc, ranks, tuple(faces), tuple(degens))


def action_of_monotone(x: TruncSimpAb, i: int, j: int, seq: Sequence[int]) -> IntMatrix:
    """X(θ) : X_j → X_i pour θ : [i] → [j], via θ = δ∘ε."""
    eps, delta = epi_mono(seq)
    p = len(delta) - 1
    missing = [t for t in range(j + 1) if t not in set(delta)]
    out = IntMatrix.identity(x.ranks[j])
    # X(δ) = d_{t_1} ⋯ d_{t_r}, d_{t_r} appliquée la première en degré j.
    for k in range(len(missing) - 1, -1, -1):
        out = x.d(p + k + 1, missing[k]) @ out
    repeats = [t for t in range(i) if eps[t] == eps[t + 1]]
    # X(ε) = s_{j_s} ⋯ s_{j_1}, s_{j_1} appliquée la première en degré p.
    for k, jj in enumerate(repeats):
        out = x.s(p + k, jj) @ out
    return out


def as_presheaf(x: TruncSimpAb) -> AbPresheaf:
    """X vu comme préfaisceau abélien sur Δ_{≤trunc}."""
    delta = build_delta_trunc(x.trunc)
    actions = tuple(action_of_monotone(x, i, j, seq) for i, j, seq in delta_maps(x.trunc))
    return AbPresheaf(delta, x.ranks, actions)
