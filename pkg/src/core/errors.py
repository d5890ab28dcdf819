"""
Exceptions nommées de cathom.

Les opérations de validation renvoient des listes de violations ; seules
les constructions et les opérations dont la précondition est violée lèvent
une de ces exceptions.
"""

from typing import List, Optional, Sequence


class CathomError(Exception):
    """Erreur de base ; le CLI la traduit en code de sortie 2."""


class DegreeOutOfCertifiedRange(CathomError):
    """Degré demandé hors de la plage certifiée par la troncature."""


class ShapeMismatch(CathomError):
    """Dimensions incompatibles (matrices, complexes, morphismes)."""


class NotComposable(CathomError):
    """Composition demandée pour une paire non composable."""


class NotAGroup(CathomError):
    """La table de multiplication ne définit pas un groupe."""


class NotAntisymmetric(CathomError):
    """La clôture réflexive-transitive n'est pas antisymétrique."""


class BaseMismatch(CathomError):
    """Les préfaisceaux ne vivent pas sur des bases compatibles."""


class ValidationError(CathomError):
    """Un invariant est violé ; `violations` détaille lesquels."""

    def __init__(self, message: str, violations: Optional[Sequence[str]] = None):
        self.violations: List[str] = list(violations or [])
        if self.violations:
            message = f"{message}: " + "; ".join(self.violations[:5])
            if len(self.violations) > 5:
                message += f" (+{len(self.violations) - 5} autres)"
        super().__init__(message)


class InterchangeSyntaxError(CathomError):
    """Fichier d'échange mal formé."""

    def __init__(self, message: str, source: str = "<input>", line: int = 0):
        self.source = source
        self.line = line
        super().__init__(f"{source}:{line}: {message}")
