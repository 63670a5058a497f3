"""Instance generators: worst-case families and random instances.

The worst-case families place many clients on a handful of locations,
so they are built from a small location-level metric and expanded by
repeating rows. The expanded cross matrix is only materialized while
it stays reasonably small; the location-level metric is checked either
way, and repeating points cannot break the triangle inequality.
"""

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .bounds import pair_bound_f
from .errors import BadKN, BadParams, RatioTooLarge, RatioTooSmall
from .metric import MetricInstance, build_from_graph, build_from_points

# above this many total points the expanded cross matrix is omitted
# (it would be quadratic in the client count); dist is always present
CROSS_POINT_LIMIT = 2000

_SQRT5 = math.sqrt(5.0)


def _expand_locations(
    loc_cross: np.ndarray,
    loc_labels,
    client_placement,
    facility_locs,
    provenance,
) -> MetricInstance:
    """Blow a location-level metric up to per-client rows.

    client_placement is a list of (location index, count); facility_locs
    a list of location indices. Row repetition preserves the metric, so
    the expanded instance is as verified as the location metric is.
    """
    loc_cross = np.asarray(loc_cross, dtype=float)
    counts = [c for _, c in client_placement]
    cidx = np.repeat([loc for loc, _ in client_placement], counts)
    fidx = np.asarray(facility_locs)
    n = int(cidx.shape[0])
    m = int(fidx.shape[0])
    dist = loc_cross[np.ix_(cidx, fidx)]
    cross = None
    if n + m <= CROSS_POINT_LIMIT:
        sel = np.concatenate([cidx, fidx])
        cross = loc_cross[np.ix_(sel, sel)]
    client_labels = tuple(
        "c%d@%s" % (i, loc_labels[loc]) for i, loc in enumerate(cidx)
    )
    facility_labels = tuple(str(loc_labels[loc]) for loc in fidx)
    return MetricInstance(
        dist=dist,
        cross=cross,
        client_labels=client_labels,
        facility_labels=facility_labels,
        provenance=provenance,
    )


def _check_rank(value, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise BadParams("%s must be an integer >= 1, got %r" % (name, value))
    return int(value)


def gen_tight_pair_line(k: int, p: int) -> MetricInstance:
    """Worst case for the pair rule in the regime p/k > 4.

    All points on a line: k clients at the origin, p - k clients at 2,
    one facility at 1 and the other just past the far clients. Both
    optima then miss the other objective by exactly f(p/k).
    """
    k = _check_rank(k, "k")
    p = _check_rank(p, "p")
    if p <= k:
        raise BadParams("need k < p, got k=%d p=%d" % (k, p))
    x = p / k
    if x <= 4.0:
        raise RatioTooSmall(
            "p/k = %g is at most 4; use the triangle family for this regime" % x
        )
    delta = pair_bound_f(x) - 2.0
    positions = np.array([0.0, 2.0, 1.0, 2.0 + delta])
    cross = np.abs(positions[:, None] - positions[None, :])
    return _expand_locations(
        cross,
        ["heavy", "light", "near", "far"],
        [(0, k), (1, p - k)],
        [2, 3],
        provenance={
            "family": "tight_pair_line",
            "k": k,
            "p": p,
            "x": x,
            "target_ratio": 2.0 + delta,
        },
    )


def gen_tight_pair_triangle(k: int, p: int) -> MetricInstance:
    """Worst case for the pair rule in the regime p/k <= 4.

    Three locations: both facilities one unit apart, the k heavy
    clients at distance 1 from one facility and sqrt(p/k) from the
    other, the p - k remaining clients on the second facility. Both
    optima come out exactly sqrt(p/k) worse on the other objective.
    """
    k = _check_rank(k, "k")
    p = _check_rank(p, "p")
    if p <= k:
        raise BadParams("need k < p, got k=%d p=%d" % (k, p))
    x = p / k
    if x > 4.0:
        raise RatioTooLarge(
            "p/k = %g exceeds 4; use the line family for this regime" % x
        )
    root = math.sqrt(x)
    # direct distances already satisfy the triangle inequality because
    # root <= 2, so no shortest-path closure is needed
    cross = np.array([
        [0.0, 1.0, root],
        [1.0, 0.0, 1.0],
        [root, 1.0, 0.0],
    ])
    return _expand_locations(
        cross,
        ["apex", "f_small", "f_large"],
        [(0, k), (2, p - k)],
        [1, 2],
        provenance={
            "family": "tight_pair_triangle",
            "k": k,
            "p": p,
            "x": x,
            "target_ratio": root,
        },
    )


# Edge lengths of the six-location worst case for three objectives
# {1, k, n}. phi is the golden ratio minus 1; the limiting ratio at
# every node is (3 + sqrt(5)) / 2.
_PHI = (_SQRT5 - 1.0) / 2.0
_GOLD = (1.0 + _SQRT5) / 2.0
_PSI = (3.0 - _SQRT5) / 2.0
_TRIPLE_VERTICES = ["a", "b", "c", "opt_one", "opt_mid", "opt_all"]
_TRIPLE_EDGES = [
    ("opt_mid", "b", _PHI),
    ("opt_mid", "c", _PHI),
    ("c", "opt_all", _PSI),
    ("opt_all", "opt_one", _PHI),
    ("opt_one", "a", 1.0),
    ("opt_one", "b", 1.0),
    ("b", "opt_all", _GOLD),
    ("b", "c", _SQRT5 - 1.0),
    ("b", "a", 2.0),
]


def triple_location_metric() -> tuple:
    """(labels, cross) for the six locations of the three-objective
    worst case, distances taken as shortest paths over its edge list."""
    index = {v: i for i, v in enumerate(_TRIPLE_VERTICES)}
    size = len(_TRIPLE_VERTICES)
    adj = np.zeros((size, size))
    for u, v, w in _TRIPLE_EDGES:
        adj[index[u], index[v]] = adj[index[v], index[u]] = w
    cross = shortest_path(csr_matrix(adj), method="D", directed=False)
    return list(_TRIPLE_VERTICES), cross


def gen_tight_triple(k: int, n: int) -> MetricInstance:
    """Worst case for three objectives {1, k, n}, needing 1 < k < n.

    Six locations; one client sits alone, k - 1 share a second spot,
    n - k share a third, and the three candidate facilities each serve
    one objective well. As k and n/k both grow, every candidate's worst
    ratio approaches (3 + sqrt(5)) / 2.
    """
    for name, v in (("k", k), ("n", n)):
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            raise BadKN("%s must be an integer, got %r" % (name, v))
    if not 1 < k < n:
        raise BadKN("need 1 < k < n, got k=%d n=%d" % (k, n))
    k, n = int(k), int(n)
    labels, cross = triple_location_metric()
    placements = [(0, 1), (1, k - 1), (2, n - k)]  # a, b, c
    facilities = [3, 4, 5]  # opt_one, opt_mid, opt_all
    return _expand_locations(
        cross,
        labels,
        placements,
        facilities,
        provenance={
            "family": "tight_triple",
            "k": k,
            "n": n,
            "limit_ratio": (3.0 + _SQRT5) / 2.0,
        },
    )


def gen_random_euclidean(
    n_clients: int,
    m_facilities: int | None,
    dim: int = 2,
    seed: int = 0,
    shared: bool = False,
) -> MetricInstance:
    """Uniform points in the unit cube under the Euclidean norm.

    With shared=True the facilities are the client points themselves
    (m_facilities is ignored). Same seed, same instance: draws come
    from a counter-based generator keyed only by the seed.
    """
    n_clients = _check_rank(n_clients, "n_clients")
    if not shared:
        m_facilities = _check_rank(m_facilities, "m_facilities")
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise BadParams("dim must be an integer >= 1, got %r" % (dim,))
    rng = np.random.Generator(np.random.Philox(seed))
    cpts = rng.random((n_clients, int(dim)))
    fpts = cpts if shared else rng.random((m_facilities, int(dim)))
    return build_from_points(
        cpts,
        fpts,
        norm=2,
        provenance={
            "family": "random_euclidean",
            "n_clients": n_clients,
            "m_facilities": n_clients if shared else m_facilities,
            "dim": int(dim),
            "seed": int(seed),
            "shared": bool(shared),
            "rng": "philox4x64",
        },
    )


def gen_random_graph_metric(
    n_vertices: int,
    edge_density: float = 0.3,
    seed: int = 0,
    n_clients: int | None = None,
    m_facilities: int | None = None,
) -> MetricInstance:
    """Shortest-path metric of a random connected weighted graph.

    A random spanning tree guarantees connectivity; extra edges are
    added independently with probability edge_density. Clients and
    facilities default to all vertices; when counts are given they are
    sampled with replacement, so repeats can occur.
    """
    n_vertices = _check_rank(n_vertices, "n_vertices")
    if not 0.0 <= edge_density <= 1.0:
        raise BadParams("edge_density must be in [0, 1], got %r" % (edge_density,))
    rng = np.random.Generator(np.random.Philox(seed))
    vertices = list(range(n_vertices))
    edges = []
    seen = set()
    # random spanning tree: attach each new vertex to a uniformly
    # chosen earlier one
    for v in range(1, n_vertices):
        u = int(rng.integers(0, v))
        edges.append((u, v, float(rng.uniform(0.1, 2.0))))
        seen.add((u, v))
    for u in range(n_vertices):
        for v in range(u + 1, n_vertices):
            if (u, v) in seen:
                continue
            if rng.random() < edge_density:
                edges.append((u, v, float(rng.uniform(0.1, 2.0))))
    if n_clients is None:
        client_ids = vertices
    else:
        n_clients = _check_rank(n_clients, "n_clients")
        client_ids = [int(i) for i in rng.integers(0, n_vertices, size=n_clients)]
    if m_facilities is None:
        facility_ids = vertices
    else:
        m_facilities = _check_rank(m_facilities, "m_facilities")
        facility_ids = [int(i) for i in rng.integers(0, n_vertices, size=m_facilities)]
    return build_from_graph(
        vertices,
        edges,
        client_ids,
        facility_ids,
        provenance={
            "family": "random_graph",
            "n_vertices": n_vertices,
            "edge_density": float(edge_density),
            "seed": int(seed),
            "rng": "philox4x64",
        },
    )
