"""Ordered clusters of points, proximity relations and multiplicities.

Points are numbered ``1..r``. A proximity is a pair ``(j, i)`` read as
"point j is proximate to point i", always with ``j > i``.

Cluster files are JSON objects with exactly three keys::

    {
      "points": 4,
      "proximities": [[2, 1], [3, 1], [3, 2], [4, 3]],
      "multiplicities": [2, 2, 2, 2]
    }

:func:`dumps_cluster` writes this canonical layout (pairs sorted by ``j``
then ``i``, two-space indent, trailing newline) and :func:`loads_cluster`
reads any JSON with those keys, so ``dumps(loads(dumps(c))) == dumps(c)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class ClusterError(ValueError):
    """Raised for malformed clusters, invalid structures or bad cluster files."""


@dataclass(frozen=True)
class Violation:
    rule: str
    pair: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ProximityStructure:
    r: int
    prox: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not isinstance(self.r, int) or self.r < 1:
            raise ClusterError(f"point count must be an integer >= 1, got {self.r!r}")
        pairs = frozenset((int(j), int(i)) for j, i in self.prox)
        object.__setattr__(self, "prox", pairs)

    @classmethod
    def from_pairs(cls, r: int, pairs: Iterable[Sequence[int]]) -> "ProximityStructure":
        return cls(r, frozenset(tuple(p) for p in pairs))

    def proximate_to(self, i: int) -> list[int]:
        """Points proximate to ``i``, in increasing order."""
        return sorted(j for j, k in self.prox if k == i)

    def proximities_of(self, j: int) -> list[int]:
        """Points that ``j`` is proximate to, in increasing order."""
        return sorted(i for k, i in self.prox if k == j)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.prox)

    def matrix(self) -> np.ndarray:
        """Proximity matrix: identity minus one entry ``[i-1, j-1]`` per pair."""
        p = np.eye(self.r, dtype=np.int64)
        for j, i in self.prox:
            p[i - 1, j - 1] = -1
        return p

    def intersection_matrix(self) -> np.ndarray:
        """Matrix of ``E~_i . E~_j`` for the strict transforms of the exceptional divisors."""
        p = self.matrix()
        return -p @ p.T


def validate(structure: ProximityStructure) -> ValidationResult:
    """Check realizability rules; every violation is reported, none raised."""
    found: list[Violation] = []
    r = structure.r
    for j, i in structure.sorted_pairs():
        if not (1 <= i < j <= r):
            found.append(
                Violation("ordering", (j, i), f"pair ({j}, {i}) needs 1 <= i < j <= {r}")
            )
    for j in range(1, r + 1):
        targets = structure.proximities_of(j)
        if len(targets) > 2:
            found.append(
                Violation(
                    "at-most-two",
                    (j, *targets),
                    f"point {j} is proximate to {len(targets)} points {targets}",
                )
            )
            continue
        if len(targets) == 2:
            i, k = targets
            if (k, i) not in structure.prox:
                found.append(
                    Violation(
                        "satellite",
                        (j, i, k),
                        f"point {j} is proximate to {i} and {k} but {k} is not proximate to {i}",
                    )
                )
    shared: dict[tuple[int, int], list[int]] = {}
    for j in range(1, r + 1):
        targets = structure.proximities_of(j)
        if len(targets) == 2:
            shared.setdefault((targets[0], targets[1]), []).append(j)
    for (i, k), js in sorted(shared.items()):
        if len(js) > 1:
            found.append(
                Violation(
                    "unique-satellite",
                    (i, k, *js),
                    f"points {js} are all proximate to both {i} and {k}; at most one can be",
                )
            )
    return ValidationResult(tuple(found))


def require_valid(structure: ProximityStructure) -> None:
    result = validate(structure)
    if not result:
        raise ClusterError("; ".join(str(v) for v in result.violations))


@dataclass(frozen=True)
class WeightedCluster:
    structure: ProximityStructure
    m: tuple[int, ...]

    def __post_init__(self) -> None:
        m = tuple(int(x) for x in self.m)
        if len(m) != self.structure.r:
            raise ClusterError(
                f"expected {self.structure.r} multiplicities, got {len(m)}"
            )
        object.__setattr__(self, "m", m)

    @classmethod
    def build(cls, r: int, prox: Iterable[Sequence[int]], m: Sequence[int]) -> "WeightedCluster":
        return cls(ProximityStructure.from_pairs(r, prox), tuple(m))

    @property
    def r(self) -> int:
        return self.structure.r

    def with_multiplicities(self, m: Sequence[int]) -> "WeightedCluster":
        return WeightedCluster(self.structure, tuple(m))


def excesses(cluster: WeightedCluster) -> tuple[int, ...]:
    """``rho_i = m_i - sum of m_j over points j proximate to i``."""
    rho = list(cluster.m)
    for j, i in cluster.structure.prox:
        rho[i - 1] -= cluster.m[j - 1]
    return tuple(rho)


def is_consistent(cluster: WeightedCluster) -> bool:
    return all(x >= 0 for x in excesses(cluster))


def scheme_degree(cluster: WeightedCluster) -> int:
    """Length ``sum m_i (m_i + 1) / 2`` of the scheme of a consistent cluster."""
    if any(x < 0 for x in cluster.m):
        raise ClusterError(f"negative multiplicity in {cluster.m}")
    if not is_consistent(cluster):
        raise ClusterError(f"cluster {cluster.m} violates a proximity inequality")
    return sum(x * (x + 1) // 2 for x in cluster.m)


# file format ---------------------------------------------------------------


def cluster_to_dict(cluster: WeightedCluster) -> dict:
    return {
        "points": cluster.r,
        "proximities": [[j, i] for j, i in cluster.structure.sorted_pairs()],
        "multiplicities": list(cluster.m),
    }


def dumps_cluster(cluster: WeightedCluster) -> str:
    d = cluster_to_dict(cluster)
    prox = ", ".join(f"[{j}, {i}]" for j, i in d["proximities"])
    mult = ", ".join(str(x) for x in d["multiplicities"])
    return (
        "{\n"
        f'  "points": {d["points"]},\n'
        f'  "proximities": [{prox}],\n'
        f'  "multiplicities": [{mult}]\n'
        "}\n"
    )


def _int_field(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ClusterError(f"field {name!r}: expected an integer, got {value!r}")
    return value


def cluster_from_dict(d) -> WeightedCluster:
    if not isinstance(d, dict):
        raise ClusterError("cluster file must contain a JSON object")
    expected = {"points", "proximities", "multiplicities"}
    missing = expected - d.keys()
    if missing:
        raise ClusterError(f"missing field(s) {sorted(missing)}")
    extra = d.keys() - expected
    if extra:
        raise ClusterError(f"unknown field(s) {sorted(extra)}")
    r = _int_field(d["points"], "points")
    if r < 1:
        raise ClusterError(f"field 'points': must be >= 1, got {r}")
    if not isinstance(d["proximities"], list):
        raise ClusterError("field 'proximities': expected a list of [j, i] pairs")
    pairs = []
    for k, pair in enumerate(d["proximities"]):
        name = f"proximities[{k}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise ClusterError(f"field {name!r}: expected a [j, i] pair, got {pair!r}")
        pairs.append((_int_field(pair[0], name), _int_field(pair[1], name)))
    if len(set(pairs)) != len(pairs):
        raise ClusterError("field 'proximities': duplicate pair")
    if not isinstance(d["multiplicities"], list):
        raise ClusterError("field 'multiplicities': expected a list of integers")
    m = [_int_field(x, f"multiplicities[{k}]") for k, x in enumerate(d["multiplicities"])]
    if len(m) != r:
        raise ClusterError(f"field 'multiplicities': expected {r} entries, got {len(m)}")
    cluster = WeightedCluster.build(r, pairs, m)
    result = validate(cluster.structure)
    if not result:
        raise ClusterError("field 'proximities': " + "; ".join(str(v) for v in result.violations))
    return cluster


def loads_cluster(text: str) -> WeightedCluster:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ClusterError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return cluster_from_dict(d)


def read_cluster(path) -> WeightedCluster:
    with open(path, encoding="utf-8") as fh:
        return loads_cluster(fh.read())


def write_cluster(cluster: WeightedCluster, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_cluster(cluster))
