"""
Format d'échange textuel des catégories, préfaisceaux et foncteurs.

Fichiers UTF-8 découpés en sections `[nom]` ; les lignes vides et celles
commençant par `#` sont ignorées. Les identités peuvent être omises dans
`[identity]` (morphisme implicite `id_<objet>`), dans `[compose]` et dans
`[action]`.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from src.core.errors import BaseMismatch, InterchangeSyntaxError, ValidationError
from src.core.fincat import FinCat, FinFunctor, is_token, validate, validate_functor
from src.core.presheaf import AbPresheaf, SetPresheaf, validate_ab, validate_set
from src.core.zlinalg import IntMatrix

logger = logging.getLogger(__name__)

CategoryResolver = Callable[[str], FinCat]
Lines = List[Tuple[int, str]]

_SECTION = re.compile(r"^\[([a-z]+)\](?:\s+(\S+))?$")


def read_text(file_path: Union[str, Path]) -> str:
    raw = Path(file_path).read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = raw.count(b"\n", 0, exc.start) + 1
        raise InterchangeSyntaxError(f"octet {raw[exc.start]:#04x} hors UTF-8", str(file_path), line) from exc


def _sections(text: str, source: str) -> Dict[str, Tuple[int, Optional[str], Lines]]:
    sections: Dict[str, Tuple[int, Optional[str], Lines]] = {}
    current = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION.match(line)
        if m:
            current = m.group(1)
            if current in sections:
                raise InterchangeSyntaxError(f"section [{current}] répétée", source, no)
            sections[current] = (no, m.group(2), [])
            continue
        if current is None:
            raise InterchangeSyntaxError("contenu hors section", source, no)
        sections[current][2].append((no, line))
    return sections


def _split_eq(line: str, source: str, no: int) -> Tuple[str, str]:
    if "=" not in line:
        raise InterchangeSyntaxError("« = » attendu", source, no)
    left, right = line.split("=", 1)
    return left.strip(), right.strip()


def _token(name: str, source: str, no: int) -> str:
    if not is_token(name):
        raise InterchangeSyntaxError(f"nom invalide {name!r}", source, no)
    return name


# ---------------------------------------------------------------------------
# Catégories
# ---------------------------------------------------------------------------

def parse_category(text: str, source: str = "<input>", name: str = "") -> FinCat:
    """
    Lit une catégorie ; la table est validée exhaustivement.

    Raises:
        InterchangeSyntaxError: ligne mal formée (avec position).
        ValidationError: un axiome est violé (violations nommées).
    """
    secs = _sections(text, source)
    for required in ("objects", "morphisms"):
        if required not in secs:
            raise InterchangeSyntaxError(f"section [{required}] manquante", source, 0)
    objects = [_token(line, source, no) for no, line in secs["objects"][2]]
    obj_index = {x: i for i, x in enumerate(objects)}
    if len(obj_index) != len(objects):
        raise InterchangeSyntaxError("objet déclaré deux fois", source, secs["objects"][0])

    morphisms: List[Tuple[str, int, int]] = []
    mor_index: Dict[str, int] = {}
    for no, line in secs["morphisms"][2]:
        if ":" not in line or "->" not in line:
            raise InterchangeSyntaxError("« nom: source -> but » attendu", source, no)
        mname, rest = line.split(":", 1)
        s, t = rest.split("->", 1)
        mname, s, t = mname.strip(), s.strip(), t.strip()
        _token(mname, source, no)
        if s not in obj_index or t not in obj_index:
            raise InterchangeSyntaxError(f"objet inconnu dans {line!r}", source, no)
        if mname in mor_index:
            raise InterchangeSyntaxError(f"morphisme {mname} déclaré deux fois", source, no)
        mor_index[mname] = len(morphisms)
        morphisms.append((mname, obj_index[s], obj_index[t]))

    declared: Dict[int, int] = {}
    for no, line in secs.get("identity", (0, None, []))[2]:
        obj, mname = _split_eq(line, source, no)
        if obj not in obj_index or mname not in mor_index:
            raise InterchangeSyntaxError(f"identité inconnue {line!r}", source, no)
        declared[obj_index[obj]] = mor_index[mname]
    identity = []
    for a, obj in enumerate(objects):
        if a in declared:
            identity.append(declared[a])
            continue
        implicit = f"id_{obj}"
        if implicit not in mor_index:
            mor_index[implicit] = len(morphisms)
            morphisms.append((implicit, a, a))
        identity.append(mor_index[implicit])

    table: Dict[Tuple[int, int], int] = {}
    for no, line in secs.get("compose", (0, None, []))[2]:
        parts = line.split()
        if len(parts) != 5 or parts[1] != "*" or parts[3] != "=":
            raise InterchangeSyntaxError("« g * f = h » attendu", source, no)
        g, f, h = parts[0], parts[2], parts[4]
        for x in (g, f, h):
            if x not in mor_index:
                raise InterchangeSyntaxError(f"morphisme inconnu {x}", source, no)
        key = (mor_index[g], mor_index[f])
        if key in table and table[key] != mor_index[h]:
            raise InterchangeSyntaxError(f"composé {g} * {f} défini deux fois", source, no)
        table[key] = mor_index[h]
    boundary = []
    for no, line in secs.get("boundary", (0, None, []))[2]:
        if line not in obj_index:
            raise InterchangeSyntaxError(f"objet de bord inconnu {line}", source, no)
        boundary.append(obj_index[line])

    cat = FinCat(objects, morphisms, identity, table, boundary=boundary, name=name or Path(source).stem)
    violations = validate(cat)
    if violations:
        raise ValidationError(f"{source}: catégorie invalide", violations)
    logger.debug("catégorie %s lue: %d objets, %d morphismes", source, cat.n_objects, cat.n_morphisms)
    return cat


def emit_category(c: FinCat) -> str:
    lines = [f"# {c.name}" if c.name else "# catégorie", "[objects]", *c.objects, "[morphisms]"]
    lines += [f"{n}: {c.objects[s]} -> {c.objects[t]}" for n, s, t in zip(c.mor_names, c.src, c.tgt)]
    lines.append("[identity]")
    lines += [f"{c.objects[a]} = {c.mor_names[i]}" for a, i in enumerate(c.identity)]
    lines.append("[compose]")
    names = c.mor_names
    for (a, b, cc), blk in sorted(c.blocks.items()):
        gs, fs = c.hom(b, cc), c.hom(a, b)
        for gi, g in enumerate(gs):
            if c.is_identity(g):
                continue
            for fi, f in enumerate(fs):
                if not c.is_identity(f):
                    lines.append(f"{names[g]} * {names[f]} = {names[blk[gi, fi]]}")
    if c.boundary:
        lines.append("[boundary]")
        lines += [c.objects[a] for a in sorted(c.boundary)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Préfaisceaux
# ---------------------------------------------------------------------------

def _parse_set(value: str, source: str, no: int) -> List[str]:
    body = value[1:-1].strip()
    if not body:
        return []
    return [_token(x.strip(), source, no) for x in body.split(",")]


def _parse_matrix(value: str, rows: int, cols: int, source: str, no: int) -> IntMatrix:
    body = value[1:-1].strip()
    if not body:
        if rows * cols:
            raise InterchangeSyntaxError(f"matrice vide pour une forme {rows}x{cols}", source, no)
        return IntMatrix.zeros(rows, cols)
    try:
        data = [[int(v) for v in row.split()] for row in body.split(";")]
    except ValueError as exc:
        raise InterchangeSyntaxError(f"coefficient non entier: {exc}", source, no) from exc
    if len(data) != rows or any(len(r) != cols for r in data):
        raise InterchangeSyntaxError(f"matrice de forme incorrecte, attendu {rows}x{cols}", source, no)
    return IntMatrix.from_rows(data, cols=cols)


def parse_presheaf(text: str, category: Optional[FinCat] = None, resolver: Optional[CategoryResolver] = None,
                   source: str = "<input>") -> Union[SetPresheaf, AbPresheaf]:
    """
    Lit un préfaisceau d'ensembles (`obj = {a, b}`) ou abélien (`obj = 3`).

    La catégorie est celle passée en argument, sinon celle de la section
    `[category] réf` résolue par `resolver`.
    """
    secs = _sections(text, source)
    if category is None:
        if "category" not in secs or not secs["category"][1] or resolver is None:
            raise InterchangeSyntaxError("catégorie de base inconnue", source, 0)
        category = resolver(secs["category"][1])
    elif "category" in secs and secs["category"][1] and resolver is not None:
        if resolver(secs["category"][1]) != category:
            raise BaseMismatch(f"{source}: déclaré sur {secs['category'][1]}, lu sur {category.name}")
    c = category
    if "values" not in secs:
        raise InterchangeSyntaxError("section [values] manquante", source, 0)
    raw_values: Dict[int, str] = {}
    for no, line in secs["values"][2]:
        obj, value = _split_eq(line, source, no)
        if obj not in c.obj_index:
            raise InterchangeSyntaxError(f"objet inconnu {obj}", source, no)
        raw_values[c.obj_index[obj]] = value
    missing = [c.objects[a] for a in range(c.n_objects) if a not in raw_values]
    if missing:
        raise InterchangeSyntaxError(f"valeurs manquantes pour {', '.join(missing)}", source, secs["values"][0])
    is_set = all(v.startswith("{") and v.endswith("}") for v in raw_values.values())
    if not is_set and not all(v.lstrip("-").isdigit() for v in raw_values.values()):
        raise InterchangeSyntaxError("valeurs mêlant ensembles et rangs", source, secs["values"][0])

    raw_actions: Dict[int, Tuple[int, str]] = {}
    for no, line in secs.get("action", (0, None, []))[2]:
        mname, value = _split_eq(line, source, no)
        if mname not in c.mor_index:
            raise InterchangeSyntaxError(f"morphisme inconnu {mname}", source, no)
        raw_actions[c.mor_index[mname]] = (no, value)

    if is_set:
        values = [_parse_set(raw_values[a], source, 0) for a in range(c.n_objects)]
        actions = []
        for f in range(c.n_morphisms):
            a, a2 = c.src[f], c.tgt[f]
            pos_a = {s: k for k, s in enumerate(values[a])}
            if f not in raw_actions:
                if c.is_identity(f) or not values[a2]:
                    actions.append(tuple(range(len(values[a2]))) if c.is_identity(f) else ())
                    continue
                raise InterchangeSyntaxError(f"action de {c.mor_names[f]} manquante", source, 0)
            no, value = raw_actions[f]
            mapping = {}
            if not (value.startswith("{") and value.endswith("}")):
                raise InterchangeSyntaxError("« {élément: image, ...} » attendu", source, no)
            for pair in [p for p in value[1:-1].split(",") if p.strip()]:
                if ":" not in pair:
                    raise InterchangeSyntaxError("« élément: image » attendu", source, no)
                s2, s = (x.strip() for x in pair.split(":", 1))
                if s2 not in values[a2] or s not in pos_a:
                    raise InterchangeSyntaxError(f"élément inconnu dans {pair.strip()!r}", source, no)
                mapping[s2] = pos_a[s]
            if set(mapping) != set(values[a2]):
                raise InterchangeSyntaxError(f"action de {c.mor_names[f]} incomplète", source, no)
            actions.append(tuple(mapping[s2] for s2 in values[a2]))
        x = SetPresheaf(c, tuple(tuple(v) for v in values), tuple(actions))
        violations = validate_set(x)
    else:
        ranks = [int(raw_values[a]) for a in range(c.n_objects)]
        mats = []
        for f in range(c.n_morphisms):
            r, r2 = ranks[c.src[f]], ranks[c.tgt[f]]
            if f not in raw_actions:
                if c.is_identity(f):
                    mats.append(IntMatrix.identity(r))
                    continue
                if r * r2 == 0:
                    mats.append(IntMatrix.zeros(r, r2))
                    continue
                raise InterchangeSyntaxError(f"action de {c.mor_names[f]} manquante", source, 0)
            no, value = raw_actions[f]
            if not (value.startswith("[") and value.endswith("]")):
                raise InterchangeSyntaxError("matrice « [..; ..] » attendue", source, no)
            mats.append(_parse_matrix(value, r, r2, source, no))
        x = AbPresheaf(c, tuple(ranks), tuple(mats))
        violations = validate_ab(x)
    if violations:
        raise ValidationError(f"{source}: préfaisceau invalide", violations)
    return x


def parse_set_presheaf(text: str, **kwargs) -> SetPresheaf:
    x = parse_presheaf(text, **kwargs)
    if not isinstance(x, SetPresheaf):
        raise InterchangeSyntaxError("préfaisceau d'ensembles attendu", kwargs.get("source", "<input>"), 0)
    return x


def parse_ab_presheaf(text: str, **kwargs) -> AbPresheaf:
    x = parse_presheaf(text, **kwargs)
    if not isinstance(x, AbPresheaf):
        raise InterchangeSyntaxError("préfaisceau abélien attendu", kwargs.get("source", "<input>"), 0)
    return x


def emit_presheaf(x: Union[SetPresheaf, AbPresheaf], category_ref: str = "") -> str:
    c = x.base
    lines = []
    if category_ref:
        lines += [f"[category] {category_ref}"]
    lines.append("[values]")
    if isinstance(x, SetPresheaf):
        lines += [f"{c.objects[a]} = {{{', '.join(x.values[a])}}}" for a in range(c.n_objects)]
        lines.append("[action]")
        for f in range(c.n_morphisms):
            if c.is_identity(f):
                continue
            a, a2 = c.src[f], c.tgt[f]
            pairs = ", ".join(f"{x.values[a2][k]}: {x.values[a][s]}" for k, s in enumerate(x.actions[f]))
            lines.append(f"{c.mor_names[f]} = {{{pairs}}}")
    else:
        lines += [f"{c.objects[a]} = {x.ranks[a]}" for a in range(c.n_objects)]
        lines.append("[action]")
        for f in range(c.n_morphisms):
            if c.is_identity(f):
                continue
            m = x.actions[f]
            body = "; ".join(" ".join(str(v) for v in row) for row in m.to_rows()) if m.rows * m.cols else ""
            lines.append(f"{c.mor_names[f]} = [{body}]")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Foncteurs
# ---------------------------------------------------------------------------

def parse_functor(text: str, resolver: CategoryResolver, source: str = "<input>") -> FinFunctor:
    secs = _sections(text, source)
    if "functor" not in secs:
        raise InterchangeSyntaxError("section [functor] manquante", source, 0)
    refs = dict(_split_eq(line, source, no) for no, line in secs["functor"][2])
    if "dom" not in refs or "cod" not in refs:
        raise InterchangeSyntaxError("dom et cod requis dans [functor]", source, secs["functor"][0])
    dom, cod = resolver(refs["dom"]), resolver(refs["cod"])
    obj_map: Dict[int, int] = {}
    for no, line in secs.get("objects", (0, None, []))[2]:
        x, y = _split_eq(line, source, no)
        if x not in dom.obj_index or y not in cod.obj_index:
            raise InterchangeSyntaxError(f"objet inconnu dans {line!r}", source, no)
        obj_map[dom.obj_index[x]] = cod.obj_index[y]
    if len(obj_map) != dom.n_objects:
        raise InterchangeSyntaxError("image d'objet manquante", source, secs.get("objects", (0,))[0])
    mor_map: Dict[int, int] = {}
    for no, line in secs.get("morphisms", (0, None, []))[2]:
        x, y = _split_eq(line, source, no)
        if x not in dom.mor_index or y not in cod.mor_index:
            raise InterchangeSyntaxError(f"morphisme inconnu dans {line!r}", source, no)
        mor_map[dom.mor_index[x]] = cod.mor_index[y]
    for a, i in enumerate(dom.identity):
        mor_map.setdefault(i, cod.identity[obj_map[a]])
    if len(mor_map) != dom.n_morphisms:
        raise InterchangeSyntaxError("image de morphisme manquante", source, 0)
    u = FinFunctor(dom, cod, tuple(obj_map[a] for a in range(dom.n_objects)),
                   tuple(mor_map[m] for m in range(dom.n_morphisms)), Path(source).stem)
    violations = validate_functor(u)
    if violations:
        raise ValidationError(f"{source}: foncteur invalide", violations)
    return u


def emit_functor(u: FinFunctor, dom_ref: str, cod_ref: str) -> str:
    dom, cod = u.dom, u.cod
    lines = ["[functor]", f"dom = {dom_ref}", f"cod = {cod_ref}", "[objects]"]
    lines += [f"{dom.objects[a]} = {cod.objects[b]}" for a, b in enumerate(u.obj_map)]
    lines.append("[morphisms]")
    lines += [f"{dom.mor_names[m]} = {cod.mor_names[b]}" for m, b in enumerate(u.mor_map)
              if not dom.is_identity(m)]
    return "\n".join(lines) + "\n"
