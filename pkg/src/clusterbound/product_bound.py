"""Rigorous check that ``b(n) = n prod_{i=2}^{n} (1 - i/(i^2+n))`` exceeds ``sqrt(n) - pi/8``.

Besides the final comparison, :func:`verify_proposition` re-evaluates every
step of the analytic argument for ``n >= 9`` (identities exactly, estimates
with enclosures) and records each as a :class:`ChainItem`. For ``n < 9`` the
certificate is marked exploratory: the comparison is still proven or not, but
several of the intermediate estimates are not expected to hold.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from operator import mul

from . import numerics as nx
from .numerics import DEFAULT_PRECISION, Enclosure, Verdict

PROPOSITION_MIN_N = 9


def _prod(values) -> Fraction:
    return reduce(mul, values, Fraction(1))


def _ratio(i: int, n: int) -> Fraction:
    return Fraction(i, i * i + n)


def product_b(n: int) -> Fraction:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return n * _prod(1 - _ratio(i, n) for i in range(2, n + 1))


def square_sum(n: int, upto: int | None = None) -> Fraction:
    """``sum_{i=1}^{upto} (i/(i^2+n))^2`` exactly; ``upto`` defaults to ``n - 1``."""
    upto = n - 1 if upto is None else upto
    return sum((_ratio(i, n) ** 2 for i in range(1, upto + 1)), Fraction(0))


@dataclass(frozen=True)
class IdentityCheck:
    n: int
    reindex: bool
    square: bool
    shifted_range: bool

    @property
    def passed(self) -> bool:
        return self.reindex and self.square and self.shifted_range


def check_identities(n: int) -> IdentityCheck:
    """Exact rational checks of the rewritings of ``b`` and ``b^2``."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    b = product_b(n)
    lower_range = n * _prod(1 - _ratio(i, n) for i in range(1, n))
    plus = _prod(1 + _ratio(i, n) for i in range(1, n))
    reindex = n * _prod(Fraction(n + i * i - i, i * i + n) for i in range(1, n)) == plus
    square = b * b == n * _prod(1 - _ratio(i, n) ** 2 for i in range(1, n))
    return IdentityCheck(n, reindex and plus == b, square, lower_range == b)


@dataclass(frozen=True)
class EpsDelta:
    n: int
    eps: Fraction
    delta: Fraction

    @property
    def ordered(self) -> bool:
        return 0 < self.eps < self.delta

    @property
    def square_above(self) -> bool:
        """``b^2 > n (1 - delta)``."""
        b = product_b(self.n)
        return b * b > self.n * (1 - self.delta)


def eps_delta(n: int) -> EpsDelta:
    """``1 - eps`` and ``1 + delta`` are the products of ``1 -/+ (i/(i^2+n))^2`` over ``i < n``."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    squares = [_ratio(i, n) ** 2 for i in range(1, n)]
    eps = 1 - _prod(1 - s for s in squares)
    delta = _prod(1 + s for s in squares) - 1
    return EpsDelta(n, eps, delta)


# Parseval ------------------------------------------------------------------


class Status(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


def parseval_closed_form(n: int, digits: int = DEFAULT_PRECISION) -> Enclosure:
    """``(pi / (2 sinh(sqrt(n) pi)))^2 (1/pi) (-pi + sinh(2 sqrt(n) pi) / (2 sqrt(n)))``."""
    d = digits + 10
    pi = nx.pi(d)
    root = nx.sqrt(n, d)
    a = root * pi
    sh = nx.sinh(a, d)
    sh2 = nx.sinh(2 * a, d)
    value = (pi / (2 * sh)) ** 2 / pi * (-pi + sh2 / (2 * root))
    return value.rounded(digits)


def _partial_square_sum(n: int, first: int, last: int, digits: int) -> Enclosure:
    """Enclosure of ``sum_{i=first}^{last} i^2/(i^2+n)^2`` by fixed-point floor/ceil."""
    w = nx._bits(digits) + max(last - first + 1, 1).bit_length()
    lo = hi = 0
    for i in range(first, last + 1):
        num = (i * i) << w
        den = (i * i + n) ** 2
        q, rem = divmod(num, den)
        lo += q
        hi += q + (rem != 0)
    return Enclosure(Fraction(lo, 1 << w), Fraction(hi, 1 << w))


@dataclass(frozen=True)
class ParsevalResult:
    n: int
    terms: int
    tolerance: Fraction
    partial: Enclosure
    closed_form: Enclosure
    tail_bound: Fraction
    residual: Enclosure
    tail_estimate_truncated: bool
    tail_estimate_closed: Verdict
    status: Status
    digits: int

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS


def _parseval_once(n: int, terms: int, tol: Fraction, digits: int):
    partial = _partial_square_sum(n, 1, terms, digits)
    closed = parseval_closed_form(n, digits)
    residual = closed - partial
    tail = Fraction(1, terms)
    # closed - partial lies in [0, tail] in exact arithmetic
    upper_ok = nx.separate(residual, tol + tail)
    lower_ok = nx.separate(residual, -tol)
    if upper_ok in (Verdict.LESS, Verdict.EQUAL) and lower_ok in (Verdict.GREATER, Verdict.EQUAL):
        status = Status.PASS
    elif upper_ok is Verdict.GREATER or lower_ok is Verdict.LESS:
        status = Status.FAIL
    else:
        status = Status.INCONCLUSIVE
    return partial, closed, residual, tail, status


def parseval_check(
    n: int,
    terms: int = 100_000,
    tolerance=Fraction(1, 10**6),
    digits: int = DEFAULT_PRECISION,
    cap: int | None = None,
) -> ParsevalResult:
    """Compare the truncated series of ``(i/(i^2+n))^2`` with its closed-form sum.

    Passes when
    ``-tolerance <= closed - partial <= tolerance + 1/terms``; the ``1/terms``
    term bounds the omitted tail since each term is at most ``1/i^2``.
    Also checks ``sum_{i=n}^{terms} (i/(i^2+n))^2 >= 1/(n+1) - 1/(terms+2)``
    and, with the closed form, ``sum_{i>=n} (i/(i^2+n))^2 >= 1/(n+1)``.
    """
    if n < 1 or terms < n:
        raise ValueError(f"need n >= 1 and terms >= n, got n={n}, terms={terms}")
    tol = Fraction(tolerance)
    if isinstance(tolerance, float):
        tol = tol.limit_denominator(10**15)
    cap = nx.MAX_PRECISION if cap is None else cap
    for d in nx.precision_schedule(digits, cap):
        partial, closed, residual, tail, status = _parseval_once(n, terms, tol, d)
        if status is not Status.INCONCLUSIVE:
            break
    head = _partial_square_sum(n, n, terms, d)
    truncated_ok = head.lower >= Fraction(1, n + 1) - Fraction(1, terms + 2)
    full_tail = closed - square_sum(n, n - 1)
    return ParsevalResult(
        n=n,
        terms=terms,
        tolerance=tol,
        partial=partial,
        closed_form=closed,
        tail_bound=tail,
        residual=residual,
        tail_estimate_truncated=truncated_ok,
        tail_estimate_closed=nx.separate(full_tail, Fraction(1, n + 1)),
        status=status,
        digits=d,
    )


# proof chain ----------------------------------------------------------------


def _status(ok) -> Status:
    if ok is None:
        return Status.INCONCLUSIVE
    return Status.PASS if ok else Status.FAIL


def _le(a, b) -> bool | None:
    """``a <= b`` proven (True), refuted (False) or undecided (None)."""
    v = nx.separate(a, b)
    if v in (Verdict.LESS, Verdict.EQUAL):
        return True
    if v is Verdict.GREATER:
        return False
    return None


def _lt(a, b) -> bool | None:
    v = nx.separate(a, b)
    if v is Verdict.LESS:
        return True
    if v in (Verdict.GREATER, Verdict.EQUAL):
        return False
    return None


def _all(*results) -> bool | None:
    if any(r is False for r in results):
        return False
    if any(r is None for r in results):
        return None
    return True


@dataclass(frozen=True)
class ChainItem:
    name: str
    status: Status
    statement: str

    def __str__(self) -> str:
        return f"{self.name:<24} {self.status!s:<13} {self.statement}"


@dataclass(frozen=True)
class PropositionCertificate:
    n: int
    b: Fraction
    rhs: Enclosure
    verdict: Verdict
    digits: int
    proof_chain: tuple[ChainItem, ...]

    @property
    def exploratory(self) -> bool:
        return self.n < PROPOSITION_MIN_N

    @property
    def chain_passed(self) -> bool:
        return all(item.status is Status.PASS for item in self.proof_chain)

    def failed_items(self) -> list[ChainItem]:
        return [item for item in self.proof_chain if item.status is not Status.PASS]


def _chain(n: int, digits: int, parseval_terms: int) -> list[ChainItem]:
    d = digits
    items: list[ChainItem] = []

    def add(name, ok, statement):
        items.append(ChainItem(name, _status(ok), statement))

    b = product_b(n)
    b2 = b * b
    ident = check_identities(n) if n >= 2 else None
    add("reindex-identity", ident.reindex and ident.shifted_range if ident else None,
        "b = n prod (n+i^2-i)/(i^2+n) = prod_{i<n} (1 + i/(i^2+n))")
    add("square-identity", ident.square if ident else None,
        "b^2 = n prod_{i<n} (1 - (i/(i^2+n))^2)")
    ed = eps_delta(n)
    add("eps-lt-delta", ed.ordered, "0 < eps < delta")
    add("square-vs-delta", ed.square_above, "b^2 > n (1 - delta)")

    s = square_sum(n)
    add("log-bound", _le(1 + ed.delta, nx.exp(s, d)), "1 + delta <= exp(S), S = sum_{i<n} (i/(i^2+n))^2")

    pr = parseval_check(n, terms=max(parseval_terms, n), digits=d)
    add("parseval-closed-form", None if pr.status is Status.INCONCLUSIVE else pr.passed,
        f"closed form matches the series to 1e-6 + 1/{pr.terms}")
    closed = pr.closed_form
    add("tail-bound", _le(Fraction(1, n + 1), closed - s),
        "sum_{i>=n} (i/(i^2+n))^2 >= 1/(n+1)")

    pi = nx.pi(d + 10)
    root = nx.sqrt(n, d + 10)
    a = root * pi
    sh = nx.sinh(a, d + 10)
    sh2 = nx.sinh(2 * a, d + 10)
    ratio = sh2 / (2 * sh**2)
    add("drop-constant-term", _le(closed, pi / (4 * root) * ratio),
        "closed form <= pi/(8 sqrt n) sinh(2 sqrt(n) pi) / sinh^2(sqrt(n) pi)")

    t = nx.exp(a, d + 10)
    inv_t2 = 1 / t**2
    add("sinh-ratio-bound",
        _all(_le(ratio, (1 + inv_t2) * (1 + Fraction(3, 2) * inv_t2)),
             _le((1 + inv_t2) * (1 + Fraction(3, 2) * inv_t2), 1 + 3 * inv_t2)),
        "sinh(2x)/(2 sinh^2 x) <= (1 + 1/t^2)(1 + 1.5/t^2) <= 1 + 3/t^2, t = e^{sqrt(n) pi}")
    y = pi / (4 * root)
    add("sum-bound-t", _le(s, y + inv_t2 - Fraction(1, n + 1)),
        "S <= pi/(4 sqrt n) + 1/t^2 - 1/(n+1)")
    add("t-bound", _all(_le(3 * n, t), 3 * n * n >= (n + 2) * (n + 1)),
        "e^{sqrt(n) pi} >= 3n and 3n^2 >= (n+2)(n+1)")
    x = y - Fraction(1, n + 2)
    add("sum-bound", _le(s, x), "S <= pi/(4 sqrt n) - 1/(n+2)")
    ex = nx.exp(x, d + 10)
    add("delta-bound", _le(ed.delta, ex - 1), "delta <= exp(pi/(4 sqrt n) - 1/(n+2)) - 1")
    add("exp-bound", _le(n * (2 - ex), b2), "b^2 >= n (2 - exp(pi/(4 sqrt n) - 1/(n+2)))")
    u = y / 2
    series = n - pi * root / 4 + Fraction(n, n + 2) - n * 2 * u**2 / (1 - u)
    add("geometric-series-bound", _le(series, n * (2 - ex)),
        "n (2 - e^x) >= n - pi sqrt(n)/4 + n/(n+2) - 2 n u^2/(1-u), u = pi/(8 sqrt n)")
    add("constants",
        _all(n >= 9,  # u <= pi/24 exactly when sqrt(n) >= 3
             _le(1 / (1 - pi / 24), Fraction(6, 5)),
             _le(Fraction(12, 5) * n * u**2, Fraction(2, 5)),
             Fraction(n, n + 2) >= Fraction(9, 11)),
        "u <= pi/24, 1/(1-pi/24) <= 1.2, 2.4 n u^2 <= 0.4, n/(n+2) >= 9/11")
    add("final-square-bound", _le(n - pi * root / 4 + Fraction(9, 11) - Fraction(2, 5), b2),
        "b^2 >= n - pi sqrt(n)/4 + 9/11 - 0.4")
    add("constant-gap", _lt(pi**2 / 64, Fraction(9, 11) - Fraction(2, 5)), "9/11 - 0.4 > pi^2/64")
    return items


def sqrt_minus_pi_over_8(n: int, digits: int = DEFAULT_PRECISION) -> Enclosure:
    return (nx.sqrt(n, digits) - nx.pi(digits) / 8).rounded(digits)


def verify_proposition(
    n: int,
    digits: int = DEFAULT_PRECISION,
    cap: int | None = None,
    parseval_terms: int = 10_000,
    with_chain: bool = True,
) -> PropositionCertificate:
    """Certificate that ``b(n) > sqrt(n) - pi/8``, escalating precision as needed."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    b = product_b(n)
    verdict, used = nx.refine(lambda p: nx.separate(b, sqrt_minus_pi_over_8(n, p)), digits, cap)
    chain = tuple(_chain(n, used, parseval_terms)) if with_chain else ()
    return PropositionCertificate(
        n=n,
        b=b,
        rhs=sqrt_minus_pi_over_8(n, used),
        verdict=verdict,
        digits=used,
        proof_chain=chain,
    )
