"""Degree lower bounds for plane curves through r points of multiplicity m.

The product bound is computed exactly; the bounds involving square roots and
pi are carried as enclosures and compared only when the enclosures separate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import numerics as nx
from .numerics import DEFAULT_PRECISION, Enclosure, Verdict
from .specialization import closed_form_bound


def theorem_bound(r: int, m: int = 1) -> Fraction:
    if r < 1 or m < 0:
        raise ValueError(f"need r >= 1 and m >= 0, got r={r}, m={m}")
    return closed_form_bound(r, m)


def nagata_floor(r: int, m: int = 1) -> int:
    """``floor(sqrt(r)) * m``."""
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    return math.isqrt(r) * m


def sqrt_bound(r: int, m: int = 1, digits: int = DEFAULT_PRECISION) -> Enclosure:
    """``(sqrt(r - 1) - pi / 8) * m``."""
    return ((nx.sqrt(r - 1, digits) - nx.pi(digits) / 8) * m).rounded(digits)


def xu_bounds(r: int, m: int = 1, digits: int = DEFAULT_PRECISION) -> tuple[Enclosure, Enclosure]:
    """``sqrt(r - 1) * m`` and ``sqrt(r) * m - 1 / (2 sqrt(r - 1))``; valid for irreducible reduced curves only."""
    root_prev = nx.sqrt(r - 1, digits)
    first = (root_prev * m).rounded(digits)
    second = (nx.sqrt(r, digits) * m - 1 / (2 * root_prev)).rounded(digits)
    return first, second


def evain_threshold(m: int) -> Fraction:
    """Nagata's conjecture is known for ``r`` strictly above this value."""
    return (Fraction(8 * m, 4 * m - 1) * (m + 1)) ** 2


def evain_applies(r: int, m: int) -> bool:
    return m >= 1 and r > evain_threshold(m)


@dataclass(frozen=True)
class Comparison:
    name: str
    verdict: Verdict
    digits: int


@dataclass(frozen=True)
class BoundReport:
    r: int
    m: int
    paper_bound: Fraction
    nagata_floor: int
    sqrt_bound: Enclosure
    xu_bounds: tuple[Enclosure, Enclosure]
    evain_applies: bool
    verdicts: dict[str, Comparison] = field(default_factory=dict)

    @property
    def improves_on_nagata(self) -> bool:
        return self.verdicts["paper_vs_nagata"].verdict is Verdict.GREATER


def _decide(product: Fraction, other, start: int, cap: int) -> tuple[Verdict, int]:
    return nx.refine(lambda d: nx.separate(product, other(d)), start, cap)


def compare_bounds(r: int, m: int = 1, digits: int = DEFAULT_PRECISION, cap: int | None = None) -> BoundReport:
    """Evaluate every bound and order the product bound against each of them.

    Enclosure comparisons double the precision from ``digits`` up to ``cap``
    and give up with ``Inconclusive``. Comparisons against Xu's bounds are
    informational, since those apply only to irreducible reduced curves.
    """
    if r < 2:
        raise ValueError(f"need r >= 2, got {r}")
    cap = nx.MAX_PRECISION if cap is None else cap
    product = theorem_bound(r, m)
    floor_bound = nagata_floor(r, m)
    verdicts = {"paper_vs_nagata": Comparison("paper_vs_nagata", nx.compare(product, floor_bound), 0)}
    for name, other in (
        ("paper_vs_sqrt", lambda d: sqrt_bound(r, m, d)),
        ("paper_vs_xu_sqrt_r_minus_1", lambda d: xu_bounds(r, m, d)[0]),
        ("paper_vs_xu_sqrt_r", lambda d: xu_bounds(r, m, d)[1]),
    ):
        verdict, used = _decide(product, other, digits, cap)
        verdicts[name] = Comparison(name, verdict, used)
    return BoundReport(
        r=r,
        m=m,
        paper_bound=product,
        nagata_floor=floor_bound,
        sqrt_bound=sqrt_bound(r, m, digits),
        xu_bounds=xu_bounds(r, m, digits),
        evain_applies=evain_applies(r, m),
        verdicts=verdicts,
    )


@dataclass(frozen=True)
class Window:
    """Integers strictly between ``(n + pi/8)^2 + 1`` and ``(n + 1)^2``."""

    n: int
    lower: Enclosure
    upper: int

    def members(self, lo: int, hi: int) -> range:
        first = max(lo, math.floor(self.lower.upper) + 1)
        last = min(hi, self.upper - 1)
        return range(first, last + 1)

    def contains(self, r: int) -> Verdict | bool:
        """True/False when the enclosure decides it, else ``Verdict.INCONCLUSIVE``."""
        if r >= self.upper:
            return False
        if r > self.lower.upper:
            return True
        if r < self.lower.lower:
            return False
        return Verdict.INCONCLUSIVE


def improvement_window(n: int, digits: int = DEFAULT_PRECISION) -> Window:
    low = ((n + nx.pi(digits) / 8) ** 2 + 1).rounded(digits)
    return Window(n, low, (n + 1) ** 2)


@dataclass(frozen=True)
class ImprovementScan:
    r_min: int
    r_max: int
    improving: tuple[int, ...]
    windows: tuple[Window, ...]

    def in_some_window(self, r: int) -> bool:
        return any(w.contains(r) is True for w in self.windows)


def improvement_scan(r_min: int, r_max: int, digits: int = DEFAULT_PRECISION) -> ImprovementScan:
    """Every ``r`` in range whose product bound strictly beats ``floor(sqrt(r))``.

    Membership uses exact rationals only. The windows are where the weaker
    ``sqrt(r - 1) - pi/8`` bound already beats ``floor(sqrt(r))``; each one
    that meets the range is reported.
    """
    if not 2 <= r_min <= r_max:
        raise ValueError(f"need 2 <= r_min <= r_max, got {r_min}, {r_max}")
    improving = tuple(r for r in range(r_min, r_max + 1) if theorem_bound(r, 1) > nagata_floor(r, 1))
    windows = []
    for n in range(math.isqrt(r_min - 1) - 1, math.isqrt(r_max) + 1):
        if n < 0:
            continue
        w = improvement_window(n, digits)
        if w.upper - 1 >= r_min and w.lower.lower < r_max:
            windows.append(w)
    return ImprovementScan(r_min, r_max, improving, tuple(windows))
