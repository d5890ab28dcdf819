"""
Algèbre linéaire entière exacte.

Matrices entières (entiers Python, précision arbitraire) stockées par lignes
creuses, formes normales de Smith et d'Hermite, noyaux, conoyaux, complexes
de chaînes tronqués, homologie et applications induites en homologie.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form as _sympy_hnf

from src.core.errors import DegreeOutOfCertifiedRange, ShapeMismatch, ValidationError

logger = logging.getLogger(__name__)

Rows = Dict[int, Dict[int, int]]


class IntMatrix:
    """
    Matrice entière immuable.

    Seules les entrées non nulles sont stockées (`_data[i][j]`), ce qui garde
    les différentielles de nerfs et de remplacements simpliciaux légères.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, data: Optional[Mapping[int, Mapping[int, int]]] = None):
        if rows < 0 or cols < 0:
            raise ShapeMismatch(f"dimensions négatives {rows}x{cols}")
        clean: Rows = {}
        for i, row in (data or {}).items():
            if not 0 <= i < rows:
                raise ShapeMismatch(f"ligne {i} hors de {rows}x{cols}")
            kept = {}
            for j, value in row.items():
                if not 0 <= j < cols:
                    raise ShapeMismatch(f"colonne {j} hors de {rows}x{cols}")
                value = int(value)
                if value:
                    kept[j] = value
            if kept:
                clean[i] = kept
        self.rows = rows
        self.cols = cols
        self._data = clean
        self._hash = None

    @classmethod
    def _raw(cls, rows: int, cols: int, data: Rows) -> "IntMatrix":
        obj = cls.__new__(cls)
        obj.rows = rows
        obj.cols = cols
        obj._data = data
        obj._hash = None
        return obj

    # --- constructeurs ---

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls._raw(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls._raw(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, {i: {i: v} for i, v in enumerate(values)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ShapeMismatch(f"ligne {i} de longueur {len(row)} au lieu de {cols}")
            data[i] = {j: v for j, v in enumerate(row)}
        return cls(len(rows), cols, data)

    @classmethod
    def from_dict(cls, rows: int, cols: int, entries: Mapping[Tuple[int, int], int]) -> "IntMatrix":
        data: Dict[int, Dict[int, int]] = {}
        for (i, j), value in entries.items():
            if value:
                data.setdefault(i, {})[j] = data.get(i, {}).get(j, 0) + value
        return cls(rows, cols, data)

    @staticmethod
    def hstack(*mats: "IntMatrix", rows: Optional[int] = None) -> "IntMatrix":
        if rows is None:
            if not mats:
                raise ShapeMismatch("hstack vide sans nombre de lignes")
            rows = mats[0].rows
        data: Rows = {}
        offset = 0
        for m in mats:
            if m.rows != rows:
                raise ShapeMismatch(f"hstack: {m.rows} lignes au lieu de {rows}")
            for i, row in m._data.items():
                target = data.setdefault(i, {})
                for j, v in row.items():
                    target[offset + j] = v
            offset += m.cols
        return IntMatrix._raw(rows, offset, data)

    @staticmethod
    def vstack(*mats: "IntMatrix", cols: Optional[int] = None) -> "IntMatrix":
        if cols is None:
            if not mats:
                raise ShapeMismatch("vstack vide sans nombre de colonnes")
            cols = mats[0].cols
        data: Rows = {}
        offset = 0
        for m in mats:
            if m.cols != cols:
                raise ShapeMismatch(f"vstack: {m.cols} colonnes au lieu de {cols}")
            for i, row in m._data.items():
                data[offset + i] = dict(row)
            offset += m.rows
        return IntMatrix._raw(offset, cols, data)

    @staticmethod
    def block_diag(*mats: "IntMatrix") -> "IntMatrix":
        data: Rows = {}
        r0 = c0 = 0
        for m in mats:
            for i, row in m._data.items():
                data[r0 + i] = {c0 + j: v for j, v in row.items()}
            r0 += m.rows
            c0 += m.cols
        return IntMatrix._raw(r0, c0, data)

    # --- accès ---

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> Tuple[int, ...]:
        """Entrées en ordre ligne par ligne."""
        return tuple(self._data.get(i, {}).get(j, 0) for i in range(self.rows) for j in range(self.cols))

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self._data.get(i, {}).get(j, 0)

    def row(self, i: int) -> Dict[int, int]:
        return dict(self._data.get(i, {}))

    def nonzero(self) -> Iterable[Tuple[int, int, int]]:
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield i, j, row[j]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def to_rows(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, row in self._data.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self._data

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        col_pos = {j: k for k, j in enumerate(col_idx)}
        data: Rows = {}
        for new_i, i in enumerate(row_idx):
            row = self._data.get(i)
            if not row:
                continue
            kept = {col_pos[j]: v for j, v in row.items() if j in col_pos}
            if kept:
                data[new_i] = kept
        return IntMatrix._raw(len(row_idx), len(col_idx), data)

    def column(self, j: int) -> "IntMatrix":
        return self.submatrix(range(self.rows), [j])

    # --- arithmétique ---

    @property
    def T(self) -> "IntMatrix":
        data: Rows = {}
        for i, row in self._data.items():
            for j, v in row.items():
                data.setdefault(j, {})[i] = v
        return IntMatrix._raw(self.cols, self.rows, data)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"produit {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        odata = other._data
        out: Rows = {}
        for i, row in self._data.items():
            acc: Dict[int, int] = {}
            for k, a in row.items():
                orow = odata.get(k)
                if not orow:
                    continue
                for j, b in orow.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return IntMatrix._raw(self.rows, other.cols, out)

    def _combine(self, other: "IntMatrix", sign: int) -> "IntMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"somme {self.shape} et {other.shape}")
        out: Rows = {i: dict(r) for i, r in self._data.items()}
        for i, row in other._data.items():
            target = out.setdefault(i, {})
            for j, v in row.items():
                nv = target.get(j, 0) + sign * v
                if nv:
                    target[j] = nv
                else:
                    target.pop(j, None)
            if not target:
                del out[i]
        return IntMatrix._raw(self.rows, self.cols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, c: int) -> "IntMatrix":
        if c == 0:
            return IntMatrix.zeros(self.rows, self.cols)
        return IntMatrix._raw(self.rows, self.cols,
                              {i: {j: c * v for j, v in r.items()} for i, r in self._data.items()})

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        out: Rows = {}
        for i1, r1 in self._data.items():
            for i2, r2 in other._data.items():
                row = {}
                for j1, a in r1.items():
                    for j2, b in r2.items():
                        row[j1 * other.cols + j2] = a * b
                out[i1 * other.rows + i2] = row
        return IntMatrix._raw(self.rows * other.rows, self.cols * other.cols, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, tuple(self.nonzero())))
        return self._hash

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"IntMatrix({self.to_rows()!r}, shape={self.shape})"
        return f"IntMatrix(shape={self.shape}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# Forme normale de Smith
# ---------------------------------------------------------------------------

def _smallest(cells: Iterable[Tuple[int, int, int]]) -> Optional[Tuple[int, int]]:
    # Plus petite valeur absolue, puis plus petit indice (ligne, colonne).
    best = None
    for i, j, v in cells:
        if v == 0:
            continue
        key = (abs(v), i, j)
        if best is None or key < best:
            best = key
    return None if best is None else (best[1], best[2])


def _smith_core(a: List[List[int]], rows: int, cols: int, track: bool):
    u = [[int(i == j) for j in range(rows)] for i in range(rows)] if track else None
    v = [[int(i == j) for j in range(cols)] for i in range(cols)] if track else None

    def swap_rows(i, k):
        if i != k:
            a[i], a[k] = a[k], a[i]
            if track:
                u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        if j != k:
            for r in a:
                r[j], r[k] = r[k], r[j]
            if track:
                for r in v:
                    r[j], r[k] = r[k], r[j]

    def add_row(i, k, c):
        # ligne i += c * ligne k
        ai, ak = a[i], a[k]
        for j in range(cols):
            if ak[j]:
                ai[j] += c * ak[j]
        if track:
            ui, uk = u[i], u[k]
            for j in range(rows):
                if uk[j]:
                    ui[j] += c * uk[j]

    def add_col(j, k, c):
        # colonne j += c * colonne k
        for r in a:
            if r[k]:
                r[j] += c * r[k]
        if track:
            for r in v:
                if r[k]:
                    r[j] += c * r[k]

    t = 0
    while t < min(rows, cols):
        pivot = _smallest((i, j, a[i][j]) for i in range(t, rows) for j in range(t, cols))
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            rest = _smallest([(i, t, a[i][t]) for i in range(t + 1, rows)]
                             + [(t, j, a[t][j]) for j in range(t + 1, cols)])
            if rest is not None:
                if rest[1] == t:
                    swap_rows(t, rest[0])
                else:
                    swap_cols(t, rest[1])
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if track:
                u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def smith_normal_form(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Forme normale de Smith avec matrices de passage.

    Returns:
        (u, s, v) avec u·m·v = s, u et v unimodulaires, s diagonale positive
        et s_ii | s_{i+1,i+1}.
    """
    if m.rows * m.cols > 250_000:
        logger.debug("Smith dense sur une matrice %dx%d", m.rows, m.cols)
    a, u, v = _smith_core(m.to_rows(), m.rows, m.cols, track=True)
    return (IntMatrix.from_rows(u, cols=m.rows), IntMatrix.from_rows(a, cols=m.cols),
            IntMatrix.from_rows(v, cols=m.cols))


def _sparse_invariants(m: IntMatrix) -> Tuple[int, ...]:
    # Élimination sur pivots unitaires, puis Smith dense sur le reste.
    rows: Rows = {i: dict(r) for i, r in m._data.items()}
    cols: Dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols):
            holders = cols.get(j)
            if not holders:
                cols.pop(j, None)
                continue
            cand = [i for i in holders if abs(rows[i][j]) == 1]
            if not cand:
                continue
            r = min(cand, key=lambda i: (len(rows[i]), i))
            prow = rows.pop(r)
            p = prow[j]
            for jj in prow:
                cols[jj].discard(r)
            for i in sorted(cols[j]):
                row_i = rows[i]
                q = row_i[j] * p
                for jj, val in prow.items():
                    nv = row_i.get(jj, 0) - q * val
                    if nv:
                        if jj not in row_i:
                            cols[jj].add(i)
                        row_i[jj] = nv
                    elif jj in row_i:
                        del row_i[jj]
                        cols[jj].discard(i)
                if not row_i:
                    del rows[i]
            cols.pop(j, None)
            units += 1
            progress = True
    left_rows = sorted(rows)
    left_cols = sorted(j for j, h in cols.items() if h)
    if not left_rows or not left_cols:
        return (1,) * units
    pos = {j: k for k, j in enumerate(left_cols)}
    dense = [[0] * len(left_cols) for _ in left_rows]
    for k, i in enumerate(left_rows):
        for j, val in rows[i].items():
            dense[k][pos[j]] = val
    if len(left_rows) * len(left_cols) > 10_000:
        logger.debug("reste dense %dx%d après %d pivots unitaires", len(left_rows), len(left_cols), units)
    a, _, _ = _smith_core(dense, len(left_rows), len(left_cols), track=False)
    diag = [a[k][k] for k in range(min(len(left_rows), len(left_cols))) if a[k][k]]
    return (1,) * units + tuple(diag)


def invariant_factors(m: IntMatrix) -> Tuple[int, ...]:
    """Coefficients diagonaux non nuls de la forme de Smith (les 1 compris)."""
    return _sparse_invariants(m)


def rank(m: IntMatrix) -> int:
    return len(invariant_factors(m))


def hermite_normal_form(m: IntMatrix) -> IntMatrix:
    """Base d'Hermite (par colonnes) du réseau engendré par les colonnes de m."""
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return IntMatrix.zeros(m.rows, 0)
    h = _sympy_hnf(Matrix(m.to_rows()))
    return IntMatrix.from_rows([[int(x) for x in h.row(i)] for i in range(h.rows)], cols=h.cols)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """
    Base du noyau de m, en colonnes, sous forme d'Hermite.

    Le noyau d'une matrice entière est un sous-réseau saturé : la base
    obtenue par Smith n'a besoin d'aucune saturation.
    """
    _, s, v = smith_normal_form(m)
    r = sum(1 for i in range(min(s.rows, s.cols)) if s[i, i])
    k = v.submatrix(range(v.rows), range(r, v.cols))
    if k.cols == 0:
        return k
    h = hermite_normal_form(k)
    if h.shape != k.shape:
        logger.warning("forme d'Hermite de forme inattendue %s, base brute conservée", h.shape)
        return k
    return h


def left_inverse(k: IntMatrix) -> IntMatrix:
    """Inverse à gauche entier d'une base saturée de rang plein."""
    u, s, v = smith_normal_form(k)
    if any(s[i, i] != 1 for i in range(k.cols)):
        raise ShapeMismatch("la base n'engendre pas un sous-réseau saturé de rang plein")
    return v @ s.T @ u


def solve_integer(m: IntMatrix, b: IntMatrix) -> Optional[IntMatrix]:
    """Solution entière x de m·x = b, ou None si aucune n'existe."""
    if b.rows != m.rows:
        raise ShapeMismatch(f"second membre {b.shape} pour une matrice {m.shape}")
    u, s, v = smith_normal_form(m)
    y = u @ b
    r = sum(1 for i in range(min(s.rows, s.cols)) if s[i, i])
    z: Dict[Tuple[int, int], int] = {}
    for i, j, val in y.nonzero():
        if i >= r or val % s[i, i]:
            return None
        z[(i, j)] = val // s[i, i]
    return v @ IntMatrix.from_dict(m.cols, b.cols, z)


# ---------------------------------------------------------------------------
# Groupes abéliens de type fini
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbGroup:
    """ℤ^rank ⊕ ℤ/d_1 ⊕ … ⊕ ℤ/d_k en facteurs invariants (d_i | d_{i+1})."""

    rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValidationError("rang libre négatif")
        for k, d in enumerate(self.torsion):
            if d < 2:
                raise ValidationError(f"facteur de torsion {d} < 2")
            if k + 1 < len(self.torsion) and self.torsion[k + 1] % d:
                raise ValidationError(f"{d} ne divise pas {self.torsion[k + 1]}")

    @classmethod
    def from_orders(cls, rank: int, orders: Sequence[int]) -> "FgAbGroup":
        """Groupe ℤ^rank ⊕ ⊕ ℤ/n_i pour des ordres quelconques, remis en facteurs invariants."""
        orders = [abs(n) for n in orders if abs(n) != 1]
        rank += sum(1 for n in orders if n == 0)
        orders = [n for n in orders if n]
        if not orders:
            return cls(rank, ())
        factors = invariant_factors(IntMatrix.diagonal(orders, len(orders), len(orders)))
        return cls(rank, tuple(d for d in factors if d > 1))

    @classmethod
    def parse(cls, text: str) -> "FgAbGroup":
        """Lit la notation de `__str__` (« Z^2 + Z/2 », « 0 »)."""
        text = text.strip()
        if text in ("0", ""):
            return cls()
        rank = 0
        orders = []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("Z/"):
                orders.append(int(part[2:]))
            else:
                raise ValueError(f"groupe illisible: {text!r}")
        return cls.from_orders(rank, orders)

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def is_z(self) -> bool:
        return self.rank == 1 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def cokernel(m: IntMatrix) -> FgAbGroup:
    factors = invariant_factors(m)
    return FgAbGroup(m.rows - len(factors), tuple(d for d in factors if d > 1))


# ---------------------------------------------------------------------------
# Complexes de chaînes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainComplex:
    """
    Complexe C_0 ← C_1 ← … ← C_N de ℤ-modules libres de rang fini.

    `diffs[i - 1]` est d_i : C_i → C_{i-1}, de forme n_{i-1} × n_i.
    """

    trunc: int
    ranks: Tuple[int, ...]
    diffs: Tuple[IntMatrix, ...]
    _cache: Dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "diffs", tuple(self.diffs))
        if self.trunc < 0 or len(self.ranks) != self.trunc + 1 or len(self.diffs) != self.trunc:
            raise ShapeMismatch(f"troncature {self.trunc}: {len(self.ranks)} rangs, {len(self.diffs)} différentielles")
        for i, d in enumerate(self.diffs, start=1):
            if d.shape != (self.ranks[i - 1], self.ranks[i]):
                raise ShapeMismatch(f"d_{i} de forme {d.shape}, attendu {(self.ranks[i - 1], self.ranks[i])}")
        bad = [f"d_{i}·d_{i + 1} != 0" for i in range(1, self.trunc)
               if not (self.diffs[i - 1] @ self.diffs[i]).is_zero()]
        if bad:
            raise ValidationError("complexe invalide", bad)

    def diff(self, i: int) -> IntMatrix:
        """d_i ; d_0 est l'application nulle C_0 → 0."""
        if i == 0:
            return IntMatrix.zeros(0, self.ranks[0])
        if not 1 <= i <= self.trunc:
            raise DegreeOutOfCertifiedRange(f"d_{i} absent d'un complexe tronqué en {self.trunc}")
        return self.diffs[i - 1]

    def direct_sum(self, other: "ChainComplex") -> "ChainComplex":
        if other.trunc != self.trunc:
            raise ShapeMismatch("somme directe de troncatures différentes")
        return ChainComplex(self.trunc, tuple(a + b for a, b in zip(self.ranks, other.ranks)),
                            tuple(IntMatrix.block_diag(a, b) for a, b in zip(self.diffs, other.diffs)))

    def invariants(self, i: int) -> Tuple[int, ...]:
        if i not in self._cache:
            self._cache[i] = invariant_factors(self.diff(i))
        return self._cache[i]


def homology(c: ChainComplex, n: int) -> FgAbGroup:
    """H_n = ker d_n / im d_{n+1}, certifié pour 0 ≤ n < trunc."""
    if not 0 <= n < c.trunc:
        raise DegreeOutOfCertifiedRange(f"H_{n} non certifié pour une troncature {c.trunc}")
    rank_in = len(c.invariants(n)) if n else 0
    factors = c.invariants(n + 1)
    return FgAbGroup(c.ranks[n] - rank_in - len(factors), tuple(d for d in factors if d > 1))


def homology_table(c: ChainComplex, upto: Optional[int] = None) -> Tuple[FgAbGroup, ...]:
    upto = c.trunc - 1 if upto is None else upto
    return tuple(homology(c, n) for n in range(upto + 1))


@dataclass(frozen=True)
class ChainMap:
    """Morphisme de complexes f_i : source_i → target_i (matrices n'_i × n_i)."""

    source: ChainComplex
    target: ChainComplex
    levels: Tuple[IntMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        s, t = self.source, self.target
        if s.trunc != t.trunc or len(self.levels) != s.trunc + 1:
            raise ShapeMismatch("morphisme de complexes de troncatures incompatibles")
        for i, f in enumerate(self.levels):
            if f.shape != (t.ranks[i], s.ranks[i]):
                raise ShapeMismatch(f"f_{i} de forme {f.shape}, attendu {(t.ranks[i], s.ranks[i])}")
        for i in range(1, s.trunc + 1):
            if self.levels[i - 1] @ s.diff(i) != t.diff(i) @ self.levels[i]:
                raise ShapeMismatch(f"f ne commute pas avec d_{i}")

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, tuple(IntMatrix.identity(r) for r in c.ranks))

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self ∘ first."""
        if first.target != self.source:
            raise ShapeMismatch("composition de morphismes de complexes non composables")
        return ChainMap(first.source, self.target,
                        tuple(g @ f for g, f in zip(self.levels, first.levels)))

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            f == IntMatrix.identity(r) for f, r in zip(self.levels, self.source.ranks))

    def is_inverse_of(self, other: "ChainMap") -> bool:
        return self.compose(other).is_identity() and other.compose(self).is_identity()


def _homology_presentation(c: ChainComplex, n: int):
    # H_n = coker(R) avec R = L·d_{n+1}, K base de ker d_n, L inverse à gauche.
    k = kernel_basis(c.diff(n))
    l = left_inverse(k)
    return k, l, l @ c.diff(n + 1)


def _induced_is_iso(f: ChainMap, n: int) -> bool:
    kc, _, rc = _homology_presentation(f.source, n)
    _, ld, rd = _homology_presentation(f.target, n)
    induced = ld @ f.levels[n] @ kc
    stacked = IntMatrix.hstack(induced, rd, rows=induced.rows)
    if not cokernel(stacked).is_trivial():
        return False
    # Injectivité : tout x avec F·x ∈ im R_D doit être dans im R_C.
    pre = kernel_basis(stacked)
    pre = pre.submatrix(range(kc.cols), range(pre.cols))
    for j in range(pre.cols):
        if solve_integer(rc, pre.column(j)) is None:
            return False
    return True


def is_homology_iso(f: ChainMap, upto: int) -> Tuple[bool, ...]:
    """Pour chaque n ≤ upto : H_n(f) est-il un isomorphisme ?"""
    if upto > f.source.trunc - 1:
        raise DegreeOutOfCertifiedRange(f"degré {upto} au-delà de la troncature {f.source.trunc}")
    return tuple(_induced_is_iso(f, n) for n in range(upto + 1))
