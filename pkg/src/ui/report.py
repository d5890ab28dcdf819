"""
Rapports du CLI : tables par degré, verdicts certifiés et mesures de temps.

Rendu JSON stable (clés triées) ou texte via des DataFrame pandas.
"""

from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from src.core.homcore import FAIL, PASS, UNCERTIFIED
from src.core.zlinalg import FgAbGroup

STATUSES = (PASS, FAIL, UNCERTIFIED)


@dataclass
class Verdict:
    """`certified` est la plage de degrés (min, max) couverte par le verdict, ou None."""

    name: str
    status: str
    certified: Optional[Tuple[int, int]] = None
    detail: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"statut inconnu {self.status}")


@dataclass
class Report:
    command: str
    inputs_digest: str
    tables: Dict[str, List[Dict]] = field(default_factory=dict)
    verdicts: List[Verdict] = field(default_factory=list)
    timing_ms: Dict[str, float] = field(default_factory=dict)
    error: str = ""

    @property
    def passed(self) -> bool:
        return not self.error and all(v.status != FAIL for v in self.verdicts)

    def exit_code(self) -> int:
        if self.error:
            return 2
        return 0 if self.passed else 1


def inputs_digest(argv: Sequence[str], contents: Iterable[bytes] = ()) -> str:
    """sha256 de la ligne de commande et du contenu des fichiers d'entrée."""
    h = hashlib.sha256()
    h.update("\0".join(argv).encode("utf-8"))
    for data in contents:
        h.update(b"\0")
        h.update(data)
    return h.hexdigest()


def homology_rows(groups: Sequence[FgAbGroup], **extra) -> List[Dict]:
    return [{"degree": n, "group": str(g), "rank": g.rank, "torsion": list(g.torsion), **extra}
            for n, g in enumerate(groups)]


class ReportBuilder:
    """Collecte tables, verdicts et temps d'exécution (en ms) d'une commande."""

    def __init__(self, command: str, digest: str):
        self.report = Report(command, digest)

    @contextmanager
    def timed(self, step: str):
        start_time = time.time()
        try:
            yield
        finally:
            end_time = time.time()
            self.report.timing_ms[step] = round((end_time - start_time) * 1000, 3)

    def table(self, name: str, rows: List[Dict]):
        self.report.tables.setdefault(name, []).extend(rows)

    def verdict(self, name: str, status: str, certified: Optional[Tuple[int, int]] = None, detail: str = ""):
        self.report.verdicts.append(Verdict(name, status, certified, detail))

    def check(self, name: str, ok: bool, certified: Optional[Tuple[int, int]] = None, detail: str = ""):
        self.verdict(name, PASS if ok else FAIL, certified, detail)

    def build(self) -> Report:
        return self.report


def to_json(report: Report, timing: bool = False) -> str:
    payload = {
        "command": report.command,
        "inputs_sha256": report.inputs_digest,
        "tables": report.tables,
        "verdicts": [{**asdict(v), "certified": list(v.certified) if v.certified else None}
                     for v in report.verdicts],
        "passed": report.passed,
    }
    if report.error:
        payload["error"] = report.error
    if timing:
        payload["timing_ms"] = report.timing_ms
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def to_text(report: Report, timing: bool = True) -> str:
    out = [f"$ {report.command}", f"entrées: {report.inputs_digest[:16]}"]
    if report.error:
        out.append(f"erreur: {report.error}")
    for name, rows in report.tables.items():
        out.append(f"\n## {name}")
        out.append(pd.DataFrame(rows).to_string(index=False) if rows else "(vide)")
    if report.verdicts:
        out.append("\n## verdicts")
        rows = [{"verdict": v.name, "statut": v.status,
                 "degrés": f"{v.certified[0]}..{v.certified[1]}" if v.certified else "-",
                 "détail": v.detail} for v in report.verdicts]
        out.append(pd.DataFrame(rows).to_string(index=False))
    if timing and report.timing_ms:
        out.append("\n## temps (ms)")
        out.append(pd.DataFrame([{"étape": k, "ms": v} for k, v in report.timing_ms.items()]).to_string(index=False))
    return "\n".join(out) + "\n"
