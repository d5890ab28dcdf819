"""
Corpus d'exemples : fichiers du répertoire CATHOM_CORPUS_DIR d'abord, puis
constructions embarquées dans le code.
"""

from __future__ import annotations

import logging
import os
import re
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from src.core.errors import CathomError
from src.core.fincat import (FinCat, FinFunctor, build_delta_trunc, build_group_cat, build_poset,
                             cyclic_group_table, diagonal_functor, discrete_category, object_functor,
                             opposite, product, terminal_category, terminal_functor)
from src.core.presheaf import (AbPresheaf, SetPresheaf, constant_z, empty_presheaf, representable,
                               terminal_presheaf)
from src.core.theta import m_functor, theta_trunc
from src.core.zlinalg import IntMatrix
from src.services.loaders import (emit_category, emit_functor, emit_presheaf, parse_category,
                                  parse_functor, parse_presheaf, read_text)

logger = logging.getLogger(__name__)

DEFAULT_CORPUS_DIR = "data/corpus"

_DELTA = re.compile(r"^delta(\d+)$")
_THETA = re.compile(r"^theta(\d+)_w(\d+)$")


def corpus_dir() -> Path:
    return Path(os.getenv("CATHOM_CORPUS_DIR", DEFAULT_CORPUS_DIR))


def _named(c: FinCat, name: str) -> FinCat:
    c.name = name
    return c


CATEGORIES: Dict[str, Callable[[], FinCat]] = {
    "terminal": terminal_category,
    "chain2": lambda: build_poset(["0", "1"], [("0", "1")], name="chain2"),
    "chain3": lambda: build_poset(["0", "1", "2"], [("0", "1"), ("1", "2")], name="chain3"),
    "cospan": lambda: build_poset(["a", "b", "c"], [("a", "c"), ("b", "c")], name="cospan"),
    "square": lambda: build_poset(["0", "l", "r", "1"], [("0", "l"), ("0", "r"), ("l", "1"), ("r", "1")],
                                  name="square"),
    "discrete2": lambda: discrete_category(["a", "b"], name="discrete2"),
    "bz2": lambda: build_group_cat(cyclic_group_table(2), names=["e", "g"], name="bz2"),
    "bz3": lambda: build_group_cat(cyclic_group_table(3), names=["e", "g", "h"], name="bz3"),
    "delta1": lambda: build_delta_trunc(1),
    "delta2": lambda: build_delta_trunc(2),
    "delta3": lambda: build_delta_trunc(3),
    "delta1x1": lambda: _named(product(build_delta_trunc(1), build_delta_trunc(1)), "delta1x1"),
    "theta1_w3": lambda: theta_trunc(1, 3),
    "theta2_w2": lambda: theta_trunc(2, 2),
}

# nom -> (constructeur, référence du domaine, référence du but)
FUNCTORS: Dict[str, Tuple[Callable[[], FinFunctor], str, str]] = {
    "cospan_to_terminal": (lambda: terminal_functor(resolve_category("cospan")), "cospan.cat", "terminal.cat"),
    "chain2_to_terminal": (lambda: terminal_functor(resolve_category("chain2")), "chain2.cat", "terminal.cat"),
    "square_to_terminal": (lambda: terminal_functor(resolve_category("square")), "square.cat", "terminal.cat"),
    "discrete2_to_terminal": (lambda: terminal_functor(resolve_category("discrete2")),
                              "discrete2.cat", "terminal.cat"),
    "bz2_to_terminal": (lambda: terminal_functor(resolve_category("bz2")), "bz2.cat", "terminal.cat"),
    "terminal_to_chain2": (lambda: object_functor(resolve_category("chain2"), 1), "terminal.cat", "chain2.cat"),
    "delta_diag1": (lambda: diagonal_functor(resolve_category("delta1")), "delta1.cat", "delta1x1.cat"),
    "m1_w2": (lambda: m_functor(1, 2), "delta2.cat", "theta1_w2.cat"),
    "m2_w1": (lambda: m_functor(2, 1), "delta1x1.cat", "theta2_w1.cat"),
}


def _bz2_sign(c: FinCat) -> AbPresheaf:
    g = c.mor_index["g"]
    actions = tuple(IntMatrix.from_rows([[-1 if f == g else 1]]) for f in range(c.n_morphisms))
    return AbPresheaf(c, (1,), actions)


PRESHEAVES: Dict[str, Callable[[FinCat], Union[SetPresheaf, AbPresheaf]]] = {
    "terminal": terminal_presheaf,
    "empty": empty_presheaf,
    "const_z": constant_z,
    "bz2_sign": _bz2_sign,
}


def _stem(ref: str) -> str:
    return Path(ref).name.split(".", 1)[0]


def _on_disk(ref: str, suffix: str, root: Optional[Path] = None) -> Optional[Path]:
    root = root or corpus_dir()
    name = ref if Path(ref).suffix else ref + suffix
    for candidate in (Path(name), root / name):
        if candidate.is_file():
            return candidate
    return None


def _builtin_category(stem: str) -> Optional[FinCat]:
    if stem in CATEGORIES:
        return CATEGORIES[stem]()
    m = _DELTA.match(stem)
    if m:
        return build_delta_trunc(int(m.group(1)))
    m = _THETA.match(stem)
    if m:
        return theta_trunc(int(m.group(1)), int(m.group(2)))
    return None


@lru_cache(maxsize=64)
def _resolve_category(ref: str, root: str) -> FinCat:
    if ref.startswith("op:"):
        return opposite(_resolve_category(ref[3:], root))
    path = _on_disk(ref, ".cat", Path(root))
    if path is not None:
        return parse_category(read_text(path), source=str(path), name=_stem(ref))
    cat = _builtin_category(_stem(ref))
    if cat is None:
        raise CathomError(f"catégorie introuvable: {ref}")
    logger.debug("catégorie %s prise dans le corpus embarqué", ref)
    return cat


def resolve_category(ref: str) -> FinCat:
    """Résout `nom`, `nom.cat`, un chemin, ou `op:<réf>`."""
    return _resolve_category(ref, str(corpus_dir()))


def resolve_presheaf(ref: str, category: Optional[FinCat] = None) -> Union[SetPresheaf, AbPresheaf]:
    """
    Résout un préfaisceau : fichier .psh / .apsh, `rep_<objet>` (représentable
    sur `category`) ou une entrée embarquée.
    """
    for suffix in (".psh", ".apsh"):
        path = _on_disk(ref, suffix)
        if path is not None:
            return parse_presheaf(read_text(path), category=category, resolver=resolve_category,
                                  source=str(path))
    stem = _stem(ref)
    if category is None:
        category = resolve_category("bz2") if stem == "bz2_sign" else None
    if category is None:
        raise CathomError(f"catégorie requise pour {ref}")
    if stem.startswith("rep_"):
        obj = stem[4:]
        if obj not in category.obj_index:
            raise CathomError(f"objet {obj} absent de {category.name}")
        return representable(category, category.obj_index[obj])
    if stem in PRESHEAVES:
        return PRESHEAVES[stem](category)
    raise CathomError(f"préfaisceau introuvable: {ref}")


def resolve_functor(ref: str) -> FinFunctor:
    path = _on_disk(ref, ".fun")
    if path is not None:
        return parse_functor(read_text(path), resolve_category, source=str(path))
    stem = _stem(ref)
    if stem not in FUNCTORS:
        raise CathomError(f"foncteur introuvable: {ref}")
    u = FUNCTORS[stem][0]()
    return FinFunctor(u.dom, u.cod, u.obj_map, u.mor_map, stem)


def write_corpus(out: Union[str, Path], include_heavy: bool = False) -> List[Path]:
    """Écrit le corpus embarqué au format d'échange ; renvoie les fichiers écrits."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def write(name: str, text: str):
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    stems = [s for s in CATEGORIES if include_heavy or s != "theta2_w2"]
    for stem in stems + ["theta1_w2", "theta2_w1"]:
        c = _builtin_category(stem)
        write(f"{stem}.cat", emit_category(c))
    bz2 = _builtin_category("bz2")
    write("bz2_sign.apsh", emit_presheaf(_bz2_sign(bz2), "bz2.cat"))
    chain2 = _builtin_category("chain2")
    write("chain2_terminal.psh", emit_presheaf(terminal_presheaf(chain2), "chain2.cat"))
    for name, (build, dom_ref, cod_ref) in FUNCTORS.items():
        write(f"{name}.fun", emit_functor(build(), dom_ref, cod_ref))
    logger.info("corpus écrit dans %s: %d fichiers", out, len(written))
    return written
