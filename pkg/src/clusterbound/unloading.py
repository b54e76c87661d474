"""Unloading: turn any weighted cluster into its equivalent consistent one.

A step on a point ``i`` whose excess ``rho_i`` is negative adds ``n`` to
``m_i`` and subtracts ``n`` from every point proximate to ``i``, where ``n``
is the least integer with ``rho_i + n * (1 + t_i) >= 0`` and ``t_i`` is the
number of points proximate to ``i``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .cluster import ClusterError, WeightedCluster, excesses, require_valid


class UnloadingError(RuntimeError):
    """The step cap was exceeded; this indicates a bug, not a property of the input."""


@dataclass(frozen=True)
class UnloadingStep:
    pivot: int
    amount: int
    rho_before: int
    rho_after: int


@dataclass(frozen=True)
class UnloadingTrace:
    initial: tuple[int, ...]
    steps: tuple[UnloadingStep, ...]
    final: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.steps)


def replay(cluster: WeightedCluster, steps: Sequence[UnloadingStep]) -> tuple[int, ...]:
    """Apply recorded steps to ``cluster.m`` without recomputing amounts."""
    m = list(cluster.m)
    for step in steps:
        m[step.pivot - 1] += step.amount
        for j in cluster.structure.proximate_to(step.pivot):
            m[j - 1] -= step.amount
    return tuple(m)


def step_amount(rho: int, t: int) -> int:
    """Least ``n`` with ``rho + n * (1 + t) >= 0``, for ``rho < 0``."""
    return -(rho // (1 + t))


def unload_step(cluster: WeightedCluster, pivot: int) -> tuple[WeightedCluster, UnloadingStep]:
    if not 1 <= pivot <= cluster.r:
        raise ClusterError(f"pivot {pivot} outside 1..{cluster.r}")
    rho = excesses(cluster)[pivot - 1]
    if rho >= 0:
        raise ClusterError(f"excess at point {pivot} is {rho} >= 0; nothing to unload")
    proximate = cluster.structure.proximate_to(pivot)
    n = step_amount(rho, len(proximate))
    m = list(cluster.m)
    m[pivot - 1] += n
    for j in proximate:
        m[j - 1] -= n
    after = cluster.with_multiplicities(m)
    return after, UnloadingStep(pivot, n, rho, excesses(after)[pivot - 1])


class Policy(enum.Enum):
    LOWEST = "lowest"
    HIGHEST = "highest"
    MOST_NEGATIVE = "most-negative"


PolicyLike = Union[Policy, str, Callable[[Sequence[int]], int]]


def _chooser(policy: PolicyLike) -> Callable[[Sequence[int]], int]:
    if callable(policy) and not isinstance(policy, Policy):
        return policy
    policy = Policy(policy)
    if policy is Policy.LOWEST:
        return lambda rho: next(k for k, x in enumerate(rho, 1) if x < 0)
    if policy is Policy.HIGHEST:
        return lambda rho: max(k for k, x in enumerate(rho, 1) if x < 0)
    # ties broken towards the lower index
    return lambda rho: min(range(1, len(rho) + 1), key=lambda k: (rho[k - 1], k))


def step_cap(cluster: WeightedCluster) -> int:
    return 10 * cluster.r * (1 + max((abs(x) for x in cluster.m), default=0))


def unload(
    cluster: WeightedCluster, policy: PolicyLike = Policy.LOWEST
) -> tuple[WeightedCluster, UnloadingTrace]:
    """Unload until consistent.

    ``policy`` picks the pivot among violating points: one of the
    :class:`Policy` values, or a callable receiving the excess vector and
    returning a 1-based index whose excess is negative.
    """
    require_valid(cluster.structure)
    choose = _chooser(policy)
    cap = step_cap(cluster)
    steps: list[UnloadingStep] = []
    current = cluster
    rho = excesses(current)
    while any(x < 0 for x in rho):
        if len(steps) >= cap:
            raise UnloadingError(
                f"unloading {cluster.m} exceeded the safety cap of {cap} steps"
            )
        current, step = unload_step(current, choose(rho))
        steps.append(step)
        rho = excesses(current)
    return current, UnloadingTrace(cluster.m, tuple(steps), current.m)


def equivalent(a: WeightedCluster, b: WeightedCluster) -> bool:
    """Same consistent representative on a shared proximity structure."""
    if a.structure != b.structure:
        raise ClusterError("equivalence is only decided for clusters with the same proximity structure")
    return unload(a)[0].m == unload(b)[0].m
