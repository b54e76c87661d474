"""Chain clusters and the stage-by-stage unloading behind the degree bound.

Stage ``i`` (``3 <= i <= r``) reads the previous consistent multiplicities on
the chain structure of depth ``i``: every point is proximate to its
predecessor, points ``3..i`` are also proximate to point 1, nothing else.
Each stage unloads, then checks exactly (with rationals) the two inequalities
the unloaded system must satisfy, together with the auxiliary facts used to
derive them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cluster import ClusterError, ProximityStructure, WeightedCluster, is_consistent
from .unloading import UnloadingTrace, unload

MAX_R = 500
MAX_M = 10**6


def build_chain(r: int, i: int) -> ProximityStructure:
    if not 2 <= i <= r:
        raise ClusterError(f"chain depth must satisfy 2 <= i <= r, got r={r}, i={i}")
    pairs = {(j, j - 1) for j in range(2, r + 1)}
    pairs |= {(j, 1) for j in range(3, i + 1)}
    return ProximityStructure(r, frozenset(pairs))


def alpha(i: int, r: int) -> Fraction:
    return Fraction(i - 1, r - 1)


def beta(i: int, r: int) -> Fraction:
    return 1 - Fraction(i - 1, (i - 1) ** 2 + r - 1)


def weighted_mass(m: Sequence[int], i: int) -> int:
    """``(i - 1) * m_1 + M`` with ``M = m_2 + ... + m_r``; unloading on the depth-``i`` chain never lowers it."""
    return (i - 1) * m[0] + sum(m[1:])


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    lhs: Fraction
    rhs: Fraction

    def __str__(self) -> str:
        mark = "ok" if self.passed else "FAIL"
        return f"{self.name}: {self.lhs} >= {self.rhs} [{mark}]"


@dataclass(frozen=True)
class StageRecord:
    stage: int
    r: int
    input: tuple[int, ...]
    output: tuple[int, ...]
    m1: int
    M: int
    A: Fraction
    alpha: Fraction
    beta: Fraction
    hypotheses: tuple[Check, ...]
    checks: tuple[Check, ...]
    trace: UnloadingTrace = field(repr=False)

    @property
    def target(self) -> Fraction:
        """``beta * A``, the value the next stage receives as its ``A``."""
        return self.beta * self.A

    @property
    def hypotheses_hold(self) -> bool:
        return all(c.passed for c in self.hypotheses)

    @property
    def passed(self) -> bool:
        return self.hypotheses_hold and all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in (*self.hypotheses, *self.checks) if not c.passed]


class StageFailure(RuntimeError):
    def __init__(self, record: StageRecord, history: Sequence[StageRecord] = ()):
        self.record = record
        self.history = tuple(history)
        failed = ", ".join(c.name for c in record.failures())
        super().__init__(f"stage {record.stage} (r={record.r}) failed: {failed}")


def _audit_mass(trace: UnloadingTrace, structure: ProximityStructure, i: int) -> tuple[Check, Check]:
    """Weighted mass along the trace: constant except at the last point, never decreasing."""
    r = structure.r
    m = list(trace.initial)
    worst_drop = Fraction(0)
    interior_change = Fraction(0)
    before = weighted_mass(m, i)
    for step in trace.steps:
        m[step.pivot - 1] += step.amount
        for j in structure.proximate_to(step.pivot):
            m[j - 1] -= step.amount
        after = weighted_mass(m, i)
        worst_drop = min(worst_drop, Fraction(after - before))
        if step.pivot != r:
            interior_change = max(interior_change, Fraction(abs(after - before)))
        before = after
    return (
        Check("mass-never-decreases", worst_drop >= 0, worst_drop, Fraction(0)),
        Check("mass-conserved-off-last-point", interior_change == 0, -interior_change, Fraction(0)),
    )


def check_descarrega(r: int, i: int, m: Sequence[int], A) -> StageRecord:
    """Unload ``m`` on the depth-``i`` chain and check both conclusions exactly.

    The hypotheses are evaluated and recorded rather than assumed; a record
    whose hypotheses fail is returned with ``passed == False``.
    """
    if len(m) != r:
        raise ClusterError(f"expected {r} multiplicities, got {len(m)}")
    A = Fraction(A)
    a_prev, a_i, b_i = alpha(i - 1, r), alpha(i, r), beta(i, r)
    m1, M = m[0], sum(m[1:])
    hyp_lhs = Fraction((i - 2) * m1 + M) / ((i - 2) * a_prev + 1)
    hypotheses = (
        Check("hypothesis-mass", hyp_lhs >= A, hyp_lhs, A),
        Check("hypothesis-first", m1 >= a_prev * A, Fraction(m1), a_prev * A),
    )

    structure = build_chain(r, i)
    result, trace = unload(WeightedCluster(structure, tuple(m)))
    out = result.m
    m1p, Mp = out[0], sum(out[1:])

    lhs1 = Fraction((i - 1) * m1p + Mp) / ((i - 1) * a_i + 1)
    rhs1 = b_i * A
    rhs2 = a_i * b_i * A
    checks = (
        Check("mass-bound", lhs1 >= rhs1, lhs1, rhs1),
        Check("first-bound", m1p >= rhs2, Fraction(m1p), rhs2),
        Check("first-dominates", m1p - a_i * Mp >= 0, m1p - a_i * Mp, Fraction(0)),
        *_audit_mass(trace, structure, i),
        Check("consistent", is_consistent(result), Fraction(int(is_consistent(result))), Fraction(1)),
        Check("non-negative", min(out) >= 0, Fraction(min(out)), Fraction(0)),
    )
    return StageRecord(
        stage=i,
        r=r,
        input=tuple(m),
        output=out,
        m1=m1p,
        M=Mp,
        A=A,
        alpha=a_i,
        beta=b_i,
        hypotheses=hypotheses,
        checks=checks,
        trace=trace,
    )


@dataclass(frozen=True)
class BoundCertificate:
    r: int
    m: int
    final: tuple[int, ...]
    m1: int
    bound: Fraction
    closed_form: Fraction

    @property
    def certified(self) -> bool:
        return self.m1 >= self.bound and self.bound == self.closed_form


@dataclass(frozen=True)
class Simulation:
    r: int
    m: int
    stages: tuple[StageRecord, ...]
    certificate: BoundCertificate

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.stages) and self.certificate.certified


def closed_form_bound(r: int, m: int = 1) -> Fraction:
    """``m (r-1) prod_{i=2}^{r-1} (1 - i / (i^2 + r - 1))`` as a rational."""
    if r == 1:
        return Fraction(0)
    value = Fraction(m * (r - 1))
    for i in range(2, r):
        value *= 1 - Fraction(i, i * i + r - 1)
    return value


def stage_bound(r: int, m: int = 1) -> Fraction:
    """``m (r-1) alpha_r prod_{i=3}^{r} beta_i``, the product the stages accumulate."""
    if r == 1:
        return Fraction(0)
    value = Fraction(m * (r - 1)) * alpha(r, r)
    for i in range(3, r + 1):
        value *= beta(i, r)
    return value


def check_caps(r: int, m: int, allow_large: bool = False) -> None:
    if allow_large:
        return
    if r > MAX_R:
        raise ValueError(f"r={r} exceeds the default cap {MAX_R}")
    if m > MAX_M:
        raise ValueError(f"m={m} exceeds the default cap {MAX_M}")


def simulate_theorem(r: int, m: int, *, strict: bool = True, allow_large: bool = False) -> Simulation:
    """Run stages ``3..r`` from the uniform system ``(m, ..., m)``.

    With ``strict`` a failing stage raises :class:`StageFailure` carrying the
    records so far; otherwise failures are left in the returned records.
    """
    if r < 2 or m < 0:
        raise ValueError(f"need r >= 2 and m >= 0, got r={r}, m={m}")
    check_caps(r, m, allow_large)
    current: tuple[int, ...] = (m,) * r
    A = Fraction(m * (r - 1))
    stages: list[StageRecord] = []
    for i in range(3, r + 1):
        record = check_descarrega(r, i, current, A)
        stages.append(record)
        if strict and not record.passed:
            raise StageFailure(record, stages)
        current = record.output
        A = record.target
    bound = stage_bound(r, m)
    certificate = BoundCertificate(r, m, current, current[0], bound, closed_form_bound(r, m))
    return Simulation(r, m, tuple(stages), certificate)
