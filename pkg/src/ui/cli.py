"""
Interface en ligne de commande de cathom.

Chaque sous-commande remplit un Report ; le code de sortie vaut 0 si tous
les verdicts passent (UNCERTIFIED compris), 1 si l'un échoue, 2 en cas
d'erreur.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.core.errors import CathomError, ValidationError
from src.core.fincat import (FinCat, category_of_elements, connected_components, identity_functor,
                             is_faithful, is_full, isomorphism_violations, opposite, slice_over,
                             terminal_objects, validate, validate_functor)
from src.core.homcore import (FAIL, PASS, UNCERTIFIED, bousfield_kan_integrator, check_wab_aspherical,
                              check_wab_aspherical_via_lambda, delta_integrator, delta_integrator_complex,
                              induced_hom_map, is_point_homology, lambda_map, presheaf_homology, tensor,
                              tensor_swap_isomorphism, validate_integrator)
from src.core.presheaf import (AbPresheaf, SetPresheaf, colim_ab, constant_z, representable, validate_ab,
                               validate_set, whitehead)
from src.core.simplicial import (degenerate_rank, gamma_comparison, moore_normalized, nerve_complex,
                                 unnormalized_complex, validate_simplicial)
from src.core.theta import i_functor, m_functor, theta_inclusion, theta_tower, theta_trunc
from src.core.zlinalg import FgAbGroup, homology, homology_table
from src.services.corpus import (corpus_dir, resolve_category, resolve_functor, resolve_presheaf,
                                 write_corpus)
from src.services.loaders import emit_category
from src.services.runner import configure_logging, parallel_map
from src.services.sampling import random_chain_complex, random_trunc_simp_ab
from src.ui.report import Report, ReportBuilder, homology_rows, inputs_digest, to_json, to_text

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, ReportBuilder], None]


def _bool(text: str) -> bool:
    if text.lower() in ("true", "1", "yes", "oui"):
        return True
    if text.lower() in ("false", "0", "no", "non"):
        return False
    raise argparse.ArgumentTypeError(f"booléen attendu, reçu {text!r}")


def _groups(text: str) -> List[FgAbGroup]:
    try:
        return [FgAbGroup.parse(part) for part in text.split(",")]
    except ValueError as exc:
        raise CathomError(str(exc)) from exc


def _certified(n: int) -> Tuple[int, int]:
    return (0, n - 1)


def _status(ok: bool, clipped: bool) -> str:
    if ok:
        return PASS
    return UNCERTIFIED if clipped else FAIL


def coefficients(text: str, cat: FinCat) -> AbPresheaf:
    """`const-z`, `whitehead:<préfaisceau>`, `file:<préfaisceau abélien>` ou `rep:<objet>`."""
    kind, _, ref = text.partition(":")
    if kind == "const-z":
        return constant_z(cat)
    if kind == "rep":
        if ref not in cat.obj_index:
            raise CathomError(f"objet {ref} absent de {cat.name}")
        return whitehead(representable(cat, cat.obj_index[ref]))
    if kind in ("whitehead", "file") and ref:
        x = resolve_presheaf(ref, cat)
        if kind == "whitehead":
            if not isinstance(x, SetPresheaf):
                raise CathomError(f"{ref} n'est pas un préfaisceau d'ensembles")
            return whitehead(x)
        if not isinstance(x, AbPresheaf):
            raise CathomError(f"{ref} n'est pas un préfaisceau abélien")
        return x
    raise CathomError(f"coefficients inconnus: {text}")


# ---------------------------------------------------------------------------
# Sous-commandes
# ---------------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace, rb: ReportBuilder):
    try:
        with rb.timed("lecture"):
            if args.functor:
                u = resolve_functor(args.functor)
                violations = validate_functor(u)
                rb.table("summary", [{"kind": "functor", "dom": u.dom.name, "cod": u.cod.name,
                                      "faithful": is_faithful(u), "full": is_full(u)}])
            elif args.presheaf:
                cat = resolve_category(args.cat) if args.cat else None
                x = resolve_presheaf(args.presheaf, cat)
                violations = validate_set(x) if isinstance(x, SetPresheaf) else validate_ab(x)
                sizes = [x.size(a) if isinstance(x, SetPresheaf) else x.ranks[a] for a in range(x.base.n_objects)]
                rb.table("summary", [{"kind": type(x).__name__, "object": x.base.objects[a], "size": s}
                                     for a, s in enumerate(sizes)])
            elif args.integrator:
                kind, _, ref = args.integrator.partition(":")
                if kind == "delta":
                    if not ref.isdigit():
                        raise CathomError(f"troncature illisible: {args.integrator}")
                    l = delta_integrator(int(ref))
                elif kind == "bk":
                    l = bousfield_kan_integrator(resolve_category(ref), args.max_degree)
                else:
                    raise CathomError(f"intégrateur inconnu: {args.integrator}")
                violations = validate_integrator(l)
                rb.table("summary", [{"kind": "integrator", "name": l.name, "degree": n, "generators": len(g)}
                                     for n, g in enumerate(l.generators)])
            elif args.cat:
                cat = resolve_category(args.cat)
                violations = validate(cat)
                rb.table("summary", [{"kind": "category", "objects": cat.n_objects,
                                      "morphisms": cat.n_morphisms, "composable_pairs": cat.composable_pairs(),
                                      "boundary": len(cat.boundary)}])
            else:
                raise CathomError("rien à valider: --cat, --presheaf, --functor ou --integrator")
    except ValidationError as exc:
        violations = exc.violations or [str(exc)]
    rb.table("violations", [{"violation": v} for v in violations])
    rb.check("valid", not violations, detail=f"{len(violations)} violation(s)")


def cmd_hom(args: argparse.Namespace, rb: ReportBuilder):
    cat = resolve_category(args.cat)
    x = coefficients(args.coeff, cat)
    n = args.max_degree
    with rb.timed("homologie"):
        groups = presheaf_homology(x, n, normalized=args.normalized, mapper=parallel_map)
    rb.table("homology", homology_rows(groups))
    rb.verdict("computed", PASS, _certified(n), f"normalized={args.normalized}")
    if n >= 1:
        rb.check("H0 = colim", groups[0] == colim_ab(x), (0, 0))
    if args.check_normalization:
        with rb.timed("autre normalisation"):
            other = presheaf_homology(x, n, normalized=not args.normalized, mapper=parallel_map)
        rb.check("normalized = unnormalized", other == groups, _certified(n))
    if args.expect:
        expected = _groups(args.expect)
        if len(expected) > n:
            raise CathomError(f"{len(expected)} groupes attendus pour {n} degrés certifiés")
        rb.check("expect", tuple(groups[:len(expected)]) == tuple(expected), (0, len(expected) - 1),
                 ", ".join(str(g) for g in expected))


def cmd_nerve_hom(args: argparse.Namespace, rb: ReportBuilder):
    cat = resolve_category(args.cat)
    n = args.max_degree
    with rb.timed("nerf"):
        cplx = nerve_complex(cat, n, normalized=args.normalized)
        groups = tuple(parallel_map(lambda k: homology(cplx, k), range(n)))
    rb.table("homology", homology_rows(groups))
    rb.table("nerve", [{"degree": k, "rank": r} for k, r in enumerate(cplx.ranks)])
    rb.verdict("computed", PASS, _certified(n))
    with rb.timed("coefficients constants"):
        via_bk = presheaf_homology(constant_z(cat), n, normalized=args.normalized)
    rb.check("nerve = H(A, Z)", via_bk == groups, _certified(n))
    if n >= 1:
        rb.check("H0 = Z^pi0", groups[0] == FgAbGroup(len(connected_components(cat))), (0, 0))


def cmd_tensor(args: argparse.Namespace, rb: ReportBuilder):
    cat = resolve_category(args.cat)
    x = coefficients(args.left, cat)
    y = coefficients(args.right, opposite(cat))
    with rb.timed("tenseur"):
        result = tensor(x, y)
    rb.table("tensor", [{"group": str(result.group), "relations": result.presentation.cols,
                         "generators": result.presentation.rows}])
    rb.verdict("computed", PASS)
    try:
        tensor_swap_isomorphism(x, y)
        rb.verdict("symmetry", PASS)
    except ValidationError as exc:
        rb.verdict("symmetry", FAIL, detail=str(exc))
    kind, _, obj = args.right.partition(":")
    if kind == "rep":
        expected = FgAbGroup(x.ranks[cat.obj_index[obj]])
        rb.check("yoneda", result.group == expected, detail=f"attendu {expected}")


def cmd_doldkan(args: argparse.Namespace, rb: ReportBuilder):
    rng = random.Random(args.seed)
    n = args.trunc
    rows: List[Dict] = []
    failures: Dict[str, List[str]] = {"gamma_roundtrip": [], "moore = unnormalized": [], "X ⊙ L_Delta": []}
    with rb.timed("échantillons"):
        for sample in range(args.samples):
            c = random_chain_complex(rng, n, args.max_rank)
            x = random_trunc_simp_ab(rng, n, args.max_rank)
            row = {"sample": sample, "ranks": list(c.ranks), "homology": [str(g) for g in homology_table(c)]}
            try:
                _, _, moore = gamma_comparison(c)
                row["gamma"] = homology_table(moore.complex) == homology_table(c)
            except ValidationError as exc:
                row["gamma"] = False
                logger.warning("échantillon %d: %s", sample, exc)
            violations = validate_simplicial(x)
            moore = moore_normalized(x)
            unnorm = unnormalized_complex(x)
            split = all(moore.complex.ranks[k] + degenerate_rank(x, k) == x.ranks[k] for k in range(n + 1))
            row["moore"] = not violations and split and homology_table(moore.complex) == homology_table(unnorm)
            try:
                row["integrator"] = delta_integrator_complex(x) == unnorm
            except ValidationError as exc:
                row["integrator"] = False
                logger.warning("échantillon %d: %s", sample, exc)
            for key, name in (("gamma", "gamma_roundtrip"), ("moore", "moore = unnormalized"),
                              ("integrator", "X ⊙ L_Delta")):
                if not row[key]:
                    failures[name].append(str(sample))
            rows.append(row)
    rb.table("samples", rows)
    for name, bad in failures.items():
        rb.check(name, not bad, _certified(n), f"échecs: {', '.join(bad)}" if bad else f"{args.samples} échantillons")
    violations = validate_integrator(delta_integrator(n))
    rb.check("L_Delta résolution", not violations, _certified(n), "; ".join(violations[:3]))


def cmd_elements(args: argparse.Namespace, rb: ReportBuilder):
    cat = resolve_category(args.cat)
    x = resolve_presheaf(args.presheaf, cat)
    if not isinstance(x, SetPresheaf):
        raise CathomError(f"{args.presheaf} n'est pas un préfaisceau d'ensembles")
    n = args.max_degree
    with rb.timed("catégorie des éléments"):
        el, _ = category_of_elements(x)
    comps = connected_components(el)
    rb.table("elements", [{"objects": el.n_objects, "morphisms": el.n_morphisms, "components": len(comps)}])
    with rb.timed("homologie"):
        cplx = nerve_complex(el, n)
        via_nerve = tuple(parallel_map(lambda k: homology(cplx, k), range(n)))
        via_bk = presheaf_homology(whitehead(x), n, mapper=parallel_map)
    rb.table("homology", [{**row, "bk": str(g)} for row, g in zip(homology_rows(via_nerve), via_bk)])
    rb.check("H(A/X) = H(A, Z^(X))", via_nerve == via_bk, _certified(n))
    if n >= 1:
        rb.check("H0 = Z^pi0", via_nerve[0] == FgAbGroup(len(comps)), (0, 0))
    if args.emit:
        Path(args.emit).write_text(emit_category(el), encoding="utf-8")


def cmd_slice(args: argparse.Namespace, rb: ReportBuilder):
    if args.functor:
        u = resolve_functor(args.functor)
    elif args.cat:
        u = identity_functor(resolve_category(args.cat))
    else:
        raise CathomError("--functor ou --cat requis")
    if args.object not in u.cod.obj_index:
        raise CathomError(f"objet {args.object} absent de {u.cod.name}")
    n = args.max_degree
    with rb.timed("tranche"):
        cat, _ = slice_over(u, u.cod.obj_index[args.object])
        cplx = nerve_complex(cat, n)
        groups = tuple(homology(cplx, k) for k in range(n))
    rb.table("slice", [{"objects": cat.n_objects, "morphisms": cat.n_morphisms,
                        "terminal_objects": len(terminal_objects(cat)), "boundary": len(cat.boundary)}])
    rb.table("homology", homology_rows(groups))
    rb.verdict(f"contractible({args.object})", _status(is_point_homology(groups), bool(cat.boundary)),
               _certified(n))


def cmd_theta(args: argparse.Namespace, rb: ReportBuilder):
    level, k = args.level, args.width
    with rb.timed("construction"):
        cat = theta_trunc(level, k)
    with rb.timed("validation"):
        violations = validate(cat)
    rb.table("theta", [{"level": level, "width": k, "objects": cat.n_objects, "morphisms": cat.n_morphisms,
                        "boundary": len(cat.boundary)}])
    rb.check("valid", not violations, detail="; ".join(violations[:3]))
    tower = theta_tower(k)
    if level == 1:
        u, flags = i_functor(tower.category(0), 0, k, table=tower.table(1))
        bad = isomorphism_violations(u)
        rb.check(f"iso Delta_<={k}", not bad and flags["fully_faithful"], detail="; ".join(bad[:3]))
    if level >= 1:
        with rb.timed("inclusion"):
            iota = theta_inclusion(level - 1, k)
        rb.check(f"Theta_{level - 1} -> Theta_{level} pleinement fidèle",
                 not validate_functor(iota) and is_faithful(iota) and is_full(iota))
        with rb.timed("m_n"):
            m = m_functor(level, k)
        rb.check(f"m_{level} foncteur", not validate_functor(m))
    if args.emit:
        Path(args.emit).write_text(emit_category(cat), encoding="utf-8")
        rb.table("emit", [{"path": args.emit}])


def cmd_aspherical(args: argparse.Namespace, rb: ReportBuilder):
    u = resolve_functor(args.functor)
    n = args.max_degree
    with rb.timed("tranches"):
        slices = check_wab_aspherical(u, n, mapper=parallel_map)
    rows = [{"object": e.obj, "slice_objects": e.slice_size[0], "slice_morphisms": e.slice_size[1],
             "homology": ", ".join(str(g) for g in e.homology), "verdict": e.verdict} for e in slices.entries]
    rb.table("slices", rows)
    for e in slices.entries:
        rb.verdict(f"aspherical({e.obj})", e.verdict, (0, e.certified_upto))
    if args.via_lambda:
        with rb.timed("lambda"):
            lam = check_wab_aspherical_via_lambda(u, n, mapper=parallel_map)
        rb.check("tranches = lambda", lam.verdicts() == slices.verdicts(), _certified(n))


def cmd_hmap(args: argparse.Namespace, rb: ReportBuilder):
    u = resolve_functor(args.functor)
    n = args.max_degree
    with rb.timed("H(u, Z)"):
        f, flags = induced_hom_map(u, n)
    rows = [{"degree": k, "source": str(homology(f.source, k)), "target": str(homology(f.target, k)),
             "iso": flag} for k, flag in enumerate(flags)]
    rb.table("hmap", rows)
    rb.verdict("H(u, Z) iso", _status(all(flags), bool(u.dom.boundary)), _certified(n))


def cmd_lambda(args: argparse.Namespace, rb: ReportBuilder):
    u = resolve_functor(args.functor)
    n = args.max_degree
    if args.representables:
        with rb.timed("lambda"):
            report = check_wab_aspherical_via_lambda(u, n, mapper=parallel_map)
        rb.table("lambda", [{"object": e.obj, "homology": ", ".join(str(g) for g in e.homology),
                             "verdict": e.verdict} for e in report.entries])
        for e in report.entries:
            rb.verdict(f"lambda({e.obj})", e.verdict, (0, e.certified_upto))
        return
    x = coefficients(args.coeff, u.cod)
    with rb.timed("lambda"):
        f, flags = lambda_map(u, x, n)
    rb.table("lambda", [{"degree": k, "source": str(homology(f.source, k)), "target": str(homology(f.target, k)),
                         "iso": flag} for k, flag in enumerate(flags)])
    rb.verdict("lambda iso", _status(all(flags), bool(u.dom.boundary)), _certified(n))


def cmd_corpus(args: argparse.Namespace, rb: ReportBuilder):
    with rb.timed("écriture"):
        paths = write_corpus(args.out, include_heavy=args.heavy)
    rb.table("files", [{"path": p.name, "bytes": p.stat().st_size} for p in paths])
    rb.verdict("written", PASS, detail=f"{len(paths)} fichiers")


# ---------------------------------------------------------------------------
# Analyse des arguments
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true", help="inclut les temps dans le JSON")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cathom", description="Homologie exacte des préfaisceaux sur catégories finies")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    def degree(p: argparse.ArgumentParser, default: int = 3):
        p.add_argument("--max-degree", type=int, default=default,
                       help="troncature N ; degrés certifiés 0 … N−1")

    p = add("validate", cmd_validate, "valide une catégorie, un préfaisceau, un foncteur ou un intégrateur")
    p.add_argument("--cat")
    p.add_argument("--presheaf")
    p.add_argument("--functor")
    p.add_argument("--integrator", help="delta:<N> ou bk:<catégorie>")
    degree(p)

    p = add("hom", cmd_hom, "homologie H(A, X)")
    p.add_argument("--cat", required=True)
    p.add_argument("--coeff", default="const-z")
    p.add_argument("--normalized", type=_bool, default=True)
    p.add_argument("--check-normalization", action="store_true")
    p.add_argument("--expect", help="groupes attendus, ex. « Z, Z/2, 0 »")
    degree(p, 4)

    p = add("nerve-hom", cmd_nerve_hom, "homologie du nerf")
    p.add_argument("--cat", required=True)
    p.add_argument("--normalized", type=_bool, default=True)
    degree(p, 4)

    p = add("tensor", cmd_tensor, "produit tensoriel X ⊙_A Y")
    p.add_argument("--cat", required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True, help="coefficients sur op(A)")

    p = add("doldkan-roundtrip", cmd_doldkan, "vérifications aléatoires de Dold–Kan")
    p.add_argument("--trunc", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--max-rank", type=int, default=3)

    p = add("elements", cmd_elements, "catégorie des éléments A/X")
    p.add_argument("--cat", required=True)
    p.add_argument("--presheaf", required=True)
    p.add_argument("--emit")
    degree(p)

    p = add("slice", cmd_slice, "tranche u/b")
    p.add_argument("--functor")
    p.add_argument("--cat")
    p.add_argument("--object", required=True)
    degree(p)

    p = add("theta", cmd_theta, "troncature de Θ_n")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--emit")

    p = add("aspherical", cmd_aspherical, "W^ab-asphéricité d'un foncteur")
    p.add_argument("--functor", required=True)
    p.add_argument("--via-lambda", action="store_true")
    degree(p)

    p = add("hmap", cmd_hmap, "H(u, Z)")
    p.add_argument("--functor", required=True)
    degree(p)

    p = add("lambda", cmd_lambda, "comparaison λ_{u,X}")
    p.add_argument("--functor", required=True)
    p.add_argument("--coeff", default="const-z")
    p.add_argument("--representables", action="store_true")
    degree(p)

    p = add("corpus", cmd_corpus, "écrit le corpus embarqué")
    p.add_argument("--out", required=True)
    p.add_argument("--heavy", action="store_true", help="inclut theta2_w2")
    return parser


def _input_contents(argv: Sequence[str]) -> List[bytes]:
    contents = []
    root = corpus_dir()
    for token in argv:
        ref = token.rpartition(":")[2]
        if not ref:
            continue
        for candidate in (Path(ref), root / ref):
            if candidate.is_file():
                contents.append(candidate.read_bytes())
                break
    return contents


def execute(args: argparse.Namespace, argv: Sequence[str]) -> Report:
    argv = list(argv)
    rb = ReportBuilder(" ".join(["cathom", *argv]), inputs_digest(argv, _input_contents(argv)))
    try:
        args.handler(args, rb)
    except CathomError as exc:
        logger.error("%s: %s", args.command, exc)
        rb.report.error = f"{type(exc).__name__}: {exc}"
    return rb.build()


def run(argv: Sequence[str]) -> Tuple[Report, int]:
    args = build_parser().parse_args(list(argv))
    report = execute(args, argv)
    return report, report.exit_code()


def render(report: Report, fmt: str = "json", timing: bool = False) -> str:
    return to_json(report, timing) + "\n" if fmt == "json" else to_text(report)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    report = execute(args, argv)
    sys.stdout.write(render(report, args.format, args.timing))
    if report.error:
        sys.stderr.write(report.error + "\n")
    return report.exit_code()
