"""Diffusion bicomplexes and the multiplex cross-hub pipeline.

A multiplex holds one simple undirected edge set per layer over a shared
node set 1..N.  The diffusion bicomplex of layer ``s`` onto layer ``t``
projects the edge structure of ``s`` onto the 2-truncated clique complex
of ``t``: its cross-edges are indexed by the edges of ``s``, so the
bottom (0, 0)-cross-Laplacian of the construction analyses where the
hubs of ``s`` sit with respect to the topology of ``t``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

from .core import BOTTOM, Bicomplex, Crossimplex, Grade, Weighting, _freeze_grades
from .errors import EmptyGrade, SameLayer, UnknownLayer
from .spectral import DENSE_LIMIT, SpectralReport, TOL_ZERO, spectral_report

Edge = tuple[int, int]


def _normalize_edges(edges: Iterable[Edge]) -> frozenset[Edge]:
    out = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        out.add((min(u, v), max(u, v)))
    return frozenset(out)


@dataclass(frozen=True)
class Multiplex:
    """Simple undirected layers over the shared node set 1..n_nodes."""

    n_nodes: int
    layers: Mapping[int, frozenset[Edge]]
    labels: Mapping[int, str] = field(default_factory=dict)
    edge_weights: Mapping[int, Mapping[Edge, float]] = field(default_factory=dict)

    def __post_init__(self):
        for layer, edges in self.layers.items():
            for u, v in edges:
                if u == v:
                    raise ValueError(f"self-loop on node {u} in layer {layer}")
                if not (1 <= u <= self.n_nodes and 1 <= v <= self.n_nodes):
                    raise ValueError(f"edge ({u},{v}) outside node range in layer {layer}")

    @classmethod
    def from_edges(
        cls,
        layer_edges: Mapping[int, Iterable[Edge]],
        n_nodes: int | None = None,
        labels: Mapping[int, str] | None = None,
    ) -> "Multiplex":
        layers = {s: _normalize_edges(e) for s, e in layer_edges.items()}
        if n_nodes is None:
            n_nodes = max(
                (v for edges in layers.values() for e in edges for v in e), default=0
            )
        return cls(n_nodes, layers, labels or {})

    def label(self, node: int) -> str:
        return self.labels.get(node, str(node))

    def layer_ids(self) -> list[int]:
        return sorted(self.layers)


def _triangles(adj: dict[int, set[int]]) -> list[tuple[int, int, int]]:
    out = []
    for u in sorted(adj):
        for v in sorted(adj[u]):
            if v <= u:
                continue
            for w in sorted(adj[u] & adj[v]):
                if w > v:
                    out.append((u, v, w))
    return out


def diffusion_bicomplex(
    m: Multiplex, s: int, t: int, *, use_weights: bool = False
) -> Bicomplex:
    """The 2-dimensional diffusion bicomplex of layer ``s`` onto layer ``t``.

    Top horizontal grades above the vertices are empty; the bottom
    horizontal complex is the clique complex of layer ``t`` truncated at
    dimension 2 (vertices, edges, triangles).  Each edge ``{i, j}`` of
    layer ``s`` with ``i < j`` becomes the cross-edge ``(i; j)``, and a
    (0, 1)-crossimplex ``(i; j, k)`` is admitted when ``i`` is adjacent
    to both ``j`` and ``k`` in layer ``s``, ``{j, k}`` is an edge of
    layer ``t``, and ``i < min(j, k)`` so that both bottom crossfaces are
    themselves cross-edges.  The outputs for ``(s, t)`` and ``(t, s)``
    are in general different.
    """
    if s == t:
        raise SameLayer(f"layer pair ({s},{t}) must be distinct")
    for layer in (s, t):
        if layer not in m.layers:
            raise UnknownLayer(f"layer {layer} not in multiplex")

    nodes = range(1, m.n_nodes + 1)
    adj_s: dict[int, set[int]] = {v: set() for v in nodes}
    for u, v in m.layers[s]:
        adj_s[u].add(v)
        adj_s[v].add(u)
    adj_t: dict[int, set[int]] = {v: set() for v in nodes}
    edges_t = m.layers[t]
    for u, v in edges_t:
        adj_t[u].add(v)
        adj_t[v].add(u)

    grades: dict[Grade, set[Crossimplex]] = {
        (0, -1): {Crossimplex((v,), ()) for v in nodes},
        (-1, 0): {Crossimplex((), (v,)) for v in nodes},
        (-1, 1): {Crossimplex((), e) for e in edges_t},
        (-1, 2): {Crossimplex((), tri) for tri in _triangles(adj_t)},
    }

    cross_edges = {Crossimplex((u,), (v,)) for u, v in m.layers[s]}
    grades[(0, 0)] = cross_edges

    bottom_tris: set[Crossimplex] = set()
    for i in nodes:
        higher = sorted(v for v in adj_s[i] if v > i)
        for a_idx, j in enumerate(higher):
            for k in higher[a_idx + 1 :]:
                if k in adj_t[j]:
                    bottom_tris.add(Crossimplex((i,), (j, k)))
    grades[(0, 1)] = bottom_tris

    weights = Weighting()
    if use_weights:
        per_edge = m.edge_weights.get(s, {})
        weights = Weighting(
            {
                Crossimplex((u,), (v,)): w
                for (u, v), w in per_edge.items()
                if w != 1.0
            }
        )

    node_set = frozenset(nodes)
    return Bicomplex(node_set, node_set, _freeze_grades(grades), weights)


class RankedHub(NamedTuple):
    rank: int
    node: int
    label: str
    stage_count: int
    last_stage: int
    hubness: float


def ranked_hubs(
    report: SpectralReport, labels: Mapping[int, str] | None = None
) -> list[RankedHub]:
    """Flatten a report's ranking into rows: stage count, last stage at
    which the node is a hub, and its hubness at that stage.  Ties in the
    ranking were already resolved (count desc, later last stage, node id)."""
    labels = labels or {}
    rows = []
    for pos, node in enumerate(report.ranking, start=1):
        last = report.last_stage_of(node)
        count = sum(1 for st in report.stages if node in st.hubs)
        rows.append(
            RankedHub(
                pos,
                node,
                labels.get(node, str(node)),
                count,
                last if last is not None else -1,
                report.stages[last].hubs[node] if last is not None else 0.0,
            )
        )
    return rows


@dataclass(frozen=True)
class DiffusionReport:
    """Cross-hub analysis of one ordered layer pair of a multiplex."""

    source: int
    target: int
    report: SpectralReport
    top_hubs: tuple[RankedHub, ...]


def diffusion_hub_analysis(
    m: Multiplex,
    s: int,
    t: int,
    top_n: int = 10,
    *,
    use_weights: bool = False,
    rule: str = "max",
    tol_zero: float = TOL_ZERO,
    dense_limit: int = DENSE_LIMIT,
) -> DiffusionReport:
    """Run the full diffusion pipeline for layer ``s`` onto layer ``t``.

    Builds the diffusion bicomplex, assembles the bottom (0, 0)
    cross-Laplacian, computes spectral persistence of the hubs of ``s``,
    and returns the ``top_n`` ranked nodes with labels.
    """
    x = diffusion_bicomplex(m, s, t, use_weights=use_weights)
    if not x.crossimplices((0, 0)):
        raise EmptyGrade(f"layer {s} has no edges; nothing to diffuse onto {t}")
    report = spectral_report(
        x, BOTTOM, rule=rule, tol_zero=tol_zero, dense_limit=dense_limit
    )
    rows = ranked_hubs(report, m.labels)
    return DiffusionReport(s, t, report, tuple(rows[:top_n]))
