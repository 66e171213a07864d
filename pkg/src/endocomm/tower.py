"""The endomorphism tower S_1, S_2, ... as iterated commutants in End_Z(M)."""
from dataclasses import dataclass

from .errors import InternalInconsistency
from .modules import DEFAULT_BOUNDS, biend, end_of_set, end_ring

INFINITY = float("inf")

__all__ = ["INFINITY", "TowerResult", "biend", "ecdim", "endo_tower", "tower_classification", "Classification"]


@dataclass(frozen=True)
class TowerResult:
    stages: tuple
    commutative_flags: tuple
    containments: tuple
    stabilized_at: object
    period_two_verified: bool

    @property
    def sizes(self):
        return tuple(s.order for s in self.stages)

    def check(self):
        """Structural facts that hold for every tower; raises on a breach."""
        n = len(self.stages)
        for i in range(n - 1):
            if self.commutative_flags[i] and not self.containments[i]:
                raise InternalInconsistency(f"stage {i + 1} is commutative but not inside stage {i + 2}")
        if not self.period_two_verified:
            raise InternalInconsistency("stages two apart differ")


def endo_tower(a, depth, bounds=DEFAULT_BOUNDS, check=True):
    """Stages ``S_1 .. S_depth`` with ``S_{n+1}`` the commutant of ``S_n``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    stages = [end_ring(a, bounds)]
    while len(stages) < depth:
        stages.append(end_of_set(a.carrier, stages[-1].homset, bounds))
    flags = tuple(s.is_commutative() for s in stages)
    cont = tuple(stages[i].issubset(stages[i + 1]) for i in range(depth - 1))
    stab = next((i + 1 for i in range(depth - 1) if stages[i].same_set(stages[i + 1])), None)
    period = all(stages[i].same_set(stages[i + 2]) for i in range(depth - 2))
    result = TowerResult(tuple(stages), flags, cont, stab, period)
    if check:
        result.check()
    return result


def ecdim(a, bounds=DEFAULT_BOUNDS, tower=None):
    """Least ``n`` with ``S_n`` commutative, or ``INFINITY``.

    ``S_{n+2} = S_n`` for every ``n``, so only the first three stages can
    matter; stages four and five are computed to confirm it.
    """
    tower = tower or endo_tower(a, 5, bounds)
    for i, c in enumerate(tower.commutative_flags[:3]):
        if c:
            return i + 1
    return INFINITY


@dataclass(frozen=True)
class Classification:
    kind: str
    start: int = None

    def __str__(self):
        return f"eventually({self.start})" if self.kind == "eventually" else self.kind


def tower_classification(a, bounds=DEFAULT_BOUNDS, tower=None):
    """``strongly``, ``eventually(n)`` or ``never``.

    Stages repeat with period two from the first stage on, so a commutative
    suffix starting at ``n`` is visible within the first ``n + 2`` stages.
    """
    tower = tower or endo_tower(a, 5, bounds)
    flags = tower.commutative_flags
    for n in range(1, len(flags) - 1):
        if all(flags[n - 1:]):
            return Classification("strongly") if n == 1 else Classification("eventually", n)
    return Classification("never")
