"""Top-k objective costs, optima, ratios, and the ratio graph.

The cost of facility A under objective k is the sum of the k largest
client distances to A. Every cost in this module is computed by the
same routine (select the k largest, sort them descending, running
sum), so two costs of the same column are bitwise comparable and an
approximation ratio can never dip below 1 through float noise.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParams,
    DegenerateOptimum,
    InvalidObjectiveSet,
    KOutOfRange,
)


@dataclass(frozen=True)
class ObjectiveSet:
    """Strictly increasing ranks, each between 1 and the client count."""

    ks: tuple

    def __post_init__(self):
        ks = tuple(self.ks)
        if not ks:
            raise InvalidObjectiveSet("objective set must be non-empty")
        for k in ks:
            if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 1:
                raise InvalidObjectiveSet("ranks must be integers >= 1, got %r" % (k,))
        if any(a >= b for a, b in zip(ks, ks[1:])):
            raise InvalidObjectiveSet("ranks must be strictly increasing: %r" % (ks,))
        object.__setattr__(self, "ks", tuple(int(k) for k in ks))

    def __len__(self):
        return len(self.ks)

    def __iter__(self):
        return iter(self.ks)

    def check_against(self, instance) -> None:
        if self.ks[-1] > instance.n_clients:
            raise KOutOfRange(
                "rank %d exceeds client count %d" % (self.ks[-1], instance.n_clients)
            )


def _as_objectives(objectives) -> ObjectiveSet:
    if isinstance(objectives, ObjectiveSet):
        return objectives
    return ObjectiveSet(tuple(objectives))


def _check_k(instance, k) -> int:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise KOutOfRange("k must be an integer, got %r" % (k,))
    if k < 1 or k > instance.n_clients:
        raise KOutOfRange("k=%d outside 1..%d" % (k, instance.n_clients))
    return int(k)


def _topk_running_sum(column: np.ndarray, k: int) -> float:
    """Sum of the k largest entries, added largest first."""
    n = column.shape[0]
    top = column if k == n else np.partition(column, n - k)[n - k:]
    ordered = np.sort(top)[::-1]
    return float(np.cumsum(ordered)[-1])


def costs_for_k(instance, k: int) -> np.ndarray:
    """Objective-k cost of every facility, shape (m,)."""
    k = _check_k(instance, k)
    dist = instance.dist
    n = dist.shape[0]
    top = dist if k == n else np.partition(dist, n - k, axis=0)[n - k:, :]
    ordered = np.sort(top, axis=0)[::-1, :]
    return np.cumsum(ordered, axis=0)[-1, :]


def centrum_cost(instance, facility: int, k: int) -> float:
    """Sum of the k largest client distances to one facility."""
    k = _check_k(instance, k)
    m = instance.m_facilities
    if not isinstance(facility, (int, np.integer)) or not -m <= facility < m:
        raise BadParams("facility index %r outside 0..%d" % (facility, m - 1))
    return _topk_running_sum(instance.dist[:, facility], k)


def optimal_facility(instance, k: int) -> tuple:
    """(index, cost) of the best facility for objective k.

    Ties go to the lowest facility index.
    """
    costs = costs_for_k(instance, k)
    best = int(np.argmin(costs))
    return best, float(costs[best])


def approx_ratio(instance, facility: int, k: int) -> float:
    """Cost of the given facility divided by the optimal cost for k.

    If the optimal cost is zero (all clients on one facility), warns
    DegenerateOptimum and returns 1.0 when the facility also has zero
    cost, inf otherwise.
    """
    costs = costs_for_k(instance, k)
    m = instance.m_facilities
    if not isinstance(facility, (int, np.integer)) or not -m <= facility < m:
        raise BadParams("facility index %r outside 0..%d" % (facility, m - 1))
    opt = float(np.min(costs))
    mine = float(costs[int(facility)])
    if opt == 0.0:
        warnings.warn(
            "optimal cost for k=%d is zero; ratio is %s"
            % (k, "1" if mine == 0.0 else "inf"),
            DegenerateOptimum,
            stacklevel=2,
        )
        return 1.0 if mine == 0.0 else float("inf")
    return mine / opt


@dataclass(frozen=True, eq=False)
class CostProfile:
    """Costs of every facility under every requested objective."""

    ks: tuple
    costs: np.ndarray  # shape (m, q)
    optima: tuple  # per objective: (facility index, cost)

    @property
    def optimal_costs(self) -> np.ndarray:
        return np.array([c for _, c in self.optima])

    @property
    def optimal_facilities(self) -> tuple:
        return tuple(i for i, _ in self.optima)

    def to_jsonable(self, instance=None) -> dict:
        labels = None if instance is None else instance.facility_labels
        return {
            "objectives": list(self.ks),
            "costs": self.costs,
            "optima": [
                {
                    "k": k,
                    "facility": idx,
                    "label": None if labels is None else labels[idx],
                    "cost": cost,
                }
                for k, (idx, cost) in zip(self.ks, self.optima)
            ],
        }


def cost_profile(instance, objectives) -> CostProfile:
    """Costs for every facility under each objective, plus the optima.

    One descending sort of the distance matrix serves all objectives;
    row k-1 of the running column sums is the objective-k cost.
    """
    objs = _as_objectives(objectives)
    objs.check_against(instance)
    ordered = np.sort(instance.dist, axis=0)[::-1, :]
    running = np.cumsum(ordered, axis=0)
    rows = np.array(objs.ks) - 1
    costs = running[rows, :].T  # (m, q)
    optima = []
    for col in range(costs.shape[1]):
        best = int(np.argmin(costs[:, col]))
        optima.append((best, float(costs[best, col])))
    return CostProfile(ks=objs.ks, costs=costs, optima=tuple(optima))


@dataclass(frozen=True, eq=False)
class RatioGraph:
    """Complete digraph over the per-objective optima.

    Node i stands for the optimal facility of objectives[i]; the edge
    i -> j is weighted by the approximation ratio of node i's facility
    measured under node j's objective. Diagonal entries are 1.
    """

    ks: tuple
    facilities: tuple  # node -> facility index
    weights: np.ndarray  # shape (q, q)
    degenerate: bool = False

    def max_outgoing(self, node: int) -> float:
        row = self.weights[node]
        if row.shape[0] == 1:
            return 1.0
        return float(np.max(np.delete(row, node)))

    def best_node(self) -> int:
        """Node whose worst outgoing ratio is smallest (lowest index on ties)."""
        worsts = [self.max_outgoing(i) for i in range(len(self.ks))]
        return int(np.argmin(worsts))

    def to_jsonable(self, instance=None) -> dict:
        labels = None if instance is None else instance.facility_labels
        return {
            "objectives": list(self.ks),
            "nodes": [
                {
                    "k": k,
                    "facility": f,
                    "label": None if labels is None else labels[f],
                    "max_outgoing": self.max_outgoing(i),
                }
                for i, (k, f) in enumerate(zip(self.ks, self.facilities))
            ],
            "weights": self.weights,
            "degenerate": self.degenerate,
        }


def ratio_graph(instance, objectives) -> RatioGraph:
    return graph_from_profile(cost_profile(instance, objectives))


def graph_from_profile(profile: CostProfile) -> RatioGraph:
    q = len(profile.ks)
    opt = profile.optimal_costs
    weights = np.ones((q, q))
    degenerate = bool(np.any(opt == 0.0))
    if degenerate:
        # a zero optimum means every client sits on that facility, which
        # is then optimal for every objective; all ratios collapse to 1
        warnings.warn(
            "an optimal cost is zero; ratio graph weights are all 1",
            DegenerateOptimum,
            stacklevel=2,
        )
    else:
        for i in range(q):
            fac = profile.optima[i][0]
            weights[i, :] = profile.costs[fac, :] / opt
    return RatioGraph(
        ks=profile.ks,
        facilities=profile.optimal_facilities,
        weights=weights,
        degenerate=degenerate,
    )
