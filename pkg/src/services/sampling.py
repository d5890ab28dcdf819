"""
Générateurs aléatoires à graine fixe pour les vérifications croisées.
"""

from __future__ import annotations

import random
from typing import List, Sequence, Tuple

from src.core.fincat import FinCat
from src.core.presheaf import (AbPresheaf, AbPresheafMap, SetPresheaf, conjugate, coproduct, representable,
                               set_product, terminal_presheaf, whitehead)
from src.core.simplicial import TruncSimpAb, free_simplicial, gamma, nerve_trunc
from src.core.zlinalg import ChainComplex, IntMatrix, left_inverse


def random_unimodular(rng: random.Random, n: int, steps: int = 0) -> IntMatrix:
    """Produit d'opérations élémentaires sur les lignes (transvections, échanges, signes)."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps or 2 * n):
        if n < 2:
            if n and rng.random() < 0.5:
                rows[0] = [-v for v in rows[0]]
            continue
        i, j = rng.sample(range(n), 2)
        kind = rng.random()
        if kind < 0.7:
            k = rng.choice([-2, -1, 1, 2])
            rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
        elif kind < 0.85:
            rows[i], rows[j] = rows[j], rows[i]
        else:
            rows[i] = [-v for v in rows[i]]
    return IntMatrix.from_rows(rows, cols=n)


def random_chain_complex(rng: random.Random, trunc: int, max_rank: int = 3) -> ChainComplex:
    """
    Somme de disques ℤ --d--> ℤ et de sphères, conjuguée par des matrices
    unimodulaires en chaque degré.
    """
    capacity = [rng.randint(0, max_rank) for _ in range(trunc + 1)]
    disks: List[List[Tuple[int, int, int]]] = [[] for _ in range(trunc + 1)]
    used = [0] * (trunc + 1)
    for k in range(1, trunc + 1):
        room = min(capacity[k] - used[k], capacity[k - 1] - used[k - 1])
        for _ in range(rng.randint(0, max(room, 0))):
            d = rng.choice([1, 1, 2, 3])
            disks[k].append((used[k - 1], used[k], d))
            used[k - 1] += 1
            used[k] += 1
    ranks = capacity
    diffs = [IntMatrix.from_dict(ranks[k - 1], ranks[k], {(r, c): d for r, c, d in disks[k]})
             for k in range(1, trunc + 1)]
    changes = [random_unimodular(rng, r) for r in ranks]
    inverses = [left_inverse(p) for p in changes]
    conj = [changes[k - 1] @ diffs[k - 1] @ inverses[k] for k in range(1, trunc + 1)]
    return ChainComplex(trunc, tuple(ranks), tuple(conj))


def conjugate_simplicial(x: TruncSimpAb, changes: Sequence[IntMatrix]) -> TruncSimpAb:
    """Transporte les opérateurs de X le long de P_n : d ↦ P_{n−1} d P_n^{-1}."""
    inverses = [left_inverse(p) for p in changes]
    faces = [tuple(changes[n - 1] @ m @ inverses[n] for m in x.faces[n]) if n else () for n in range(x.trunc + 1)]
    degens = [tuple(changes[n + 1] @ m @ inverses[n] for m in x.degeneracies[n]) for n in range(x.trunc + 1)]
    return TruncSimpAb(x.trunc, x.ranks, tuple(faces), tuple(degens))


def random_trunc_simp_ab(rng: random.Random, trunc: int, max_rank: int = 3) -> TruncSimpAb:
    """Γ d'un complexe aléatoire, rebasé aléatoirement degré par degré."""
    x = gamma(random_chain_complex(rng, trunc, max_rank))
    return conjugate_simplicial(x, [random_unimodular(rng, r) for r in x.ranks])


def random_free_simplicial(rng: random.Random, category: FinCat, trunc: int) -> TruncSimpAb:
    x = free_simplicial(nerve_trunc(category, trunc))
    return conjugate_simplicial(x, [random_unimodular(rng, r) for r in x.ranks])


def random_set_presheaf(rng: random.Random, c: FinCat, pieces: int = 3) -> SetPresheaf:
    """Coproduit de représentables, du terminal et d'un produit de deux représentables."""
    parts = []
    for _ in range(rng.randint(1, pieces)):
        kind = rng.random()
        if kind < 0.6:
            parts.append(representable(c, rng.randrange(c.n_objects)))
        elif kind < 0.8:
            parts.append(terminal_presheaf(c))
        else:
            parts.append(set_product(representable(c, rng.randrange(c.n_objects)),
                                     representable(c, rng.randrange(c.n_objects))))
    x = parts[0]
    for y in parts[1:]:
        x = coproduct(x, y)
    return x


def random_ab_presheaf(rng: random.Random, c: FinCat, pieces: int = 3) -> Tuple[AbPresheaf, AbPresheafMap]:
    """ℤ^(X) pour X aléatoire, transporté par des changements de base ; renvoie aussi l'isomorphisme."""
    x = whitehead(random_set_presheaf(rng, c, pieces))
    return conjugate(x, [random_unimodular(rng, r) for r in x.ranks])
