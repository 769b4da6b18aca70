"""Boundary matrices, cross-Betti vectors, and cone/kite enumeration.

Chain spaces are indexed by canonical bases (lexicographic order on the
vertex tuples).  Betti numbers are computed by rank-nullity over the
reals and cross-checked against the kernel dimension of the matching
Laplacian; both values ride along in the returned record.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .core import (
    BOTTOM,
    TOP,
    Bicomplex,
    Crossimplex,
    Grade,
    Multicomplex,
    bottom_crossfaces,
    top_crossfaces,
)
from .errors import RankAmbiguous

# singular values >= RANK_TAU * sigma_max count toward the rank; values
# inside a factor-10 band around that threshold are treated as ambiguous
RANK_TAU = 1e-10

DEFAULT_TABLE_GRADES: tuple[Grade, ...] = ((0, -1), (1, -1), (-1, 0), (-1, 1), (0, 0))


@dataclass(frozen=True)
class ChainBasis:
    """Ordered basis of the chain space at one grade."""

    grade: Grade
    simplices: tuple[Crossimplex, ...]
    index: dict[Crossimplex, int]

    def __len__(self) -> int:
        return len(self.simplices)


def chain_basis(x: Bicomplex, grade: Grade) -> ChainBasis:
    simplices = tuple(sorted(x.crossimplices(grade)))
    return ChainBasis(grade, simplices, {a: i for i, a in enumerate(simplices)})


@dataclass(frozen=True)
class SignedSparseMatrix:
    """A signed incidence matrix between two chain bases."""

    rows: ChainBasis
    cols: ChainBasis
    entries: tuple[tuple[int, int, int], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    def tocsr(self, dtype=np.float64) -> sp.csr_matrix:
        if not self.entries:
            return sp.csr_matrix(self.shape, dtype=dtype)
        r, c, v = zip(*self.entries)
        return sp.csr_matrix(
            (np.asarray(v, dtype=dtype), (r, c)), shape=self.shape
        )

    def toarray(self, dtype=np.float64) -> np.ndarray:
        return self.tocsr(dtype=dtype).toarray()


def boundary_matrix(x: Bicomplex, grade: Grade, side: str) -> SignedSparseMatrix:
    """Matrix of the top or bottom cross-boundary operator at ``grade``.

    Column ``a`` holds the signs of the crossfaces of ``a`` on the chosen
    side; an empty source or target grade yields a matrix with zero
    columns or rows.
    """
    k, l = grade
    face_grade = (k - 1, l) if side == TOP else (k, l - 1)
    rows = chain_basis(x, face_grade)
    cols = chain_basis(x, grade)
    faces_of = top_crossfaces if side == TOP else bottom_crossfaces
    entries = []
    for j, a in enumerate(cols.simplices):
        for face, sign in faces_of(a):
            i = rows.index.get(face)
            if i is not None:
                entries.append((i, j, sign))
    return SignedSparseMatrix(rows, cols, tuple(entries))


def _rank(matrix: SignedSparseMatrix, tau: float = RANK_TAU) -> int:
    m, n = matrix.shape
    if m == 0 or n == 0 or not matrix.entries:
        return 0
    sigma = np.linalg.svd(matrix.toarray(), compute_uv=False)
    threshold = tau * sigma[0]
    band = (threshold / 10.0, threshold * 10.0)
    for s in sigma:
        if band[0] <= s < band[1]:
            raise RankAmbiguous(float(s), band)
    return int(np.sum(sigma >= threshold))


@dataclass(frozen=True)
class BettiVector:
    """Top and bottom cross-Betti numbers at one grade.

    ``routes_agree`` records whether the rank-nullity computation and the
    Laplacian kernel dimension produced the same values.
    """

    top: int
    bottom: int
    routes_agree: bool = True

    def as_pair(self) -> tuple[int, int]:
        return (self.top, self.bottom)


def _laplacian_nullity(x: Bicomplex, grade: Grade, part: str) -> int:
    from .spectral import TOL_ZERO, laplacian

    lap = laplacian(x, grade, part)
    values = np.linalg.eigvalsh(lap.matrix.toarray())
    scale = max(1.0, float(values[-1]))
    return int(np.sum(values <= TOL_ZERO * scale))


def betti_vector(x: Bicomplex, grade: Grade, *, cross_check: bool = True) -> BettiVector:
    """Cross-Betti vector at ``grade`` by rank-nullity.

    The top number is ``nullity(d_top at grade) - rank(d_top one top step
    above)``; the bottom number is the bottom-side analogue.  When
    ``cross_check`` is set and the grade is non-empty, the kernel
    dimensions of the two cross-Laplacians are computed as well and
    compared.
    """
    k, l = grade
    n = len(x.crossimplices(grade))
    if n == 0:
        return BettiVector(0, 0)

    d_top = boundary_matrix(x, grade, TOP)
    d_top_above = boundary_matrix(x, (k + 1, l), TOP)
    top = (n - _rank(d_top)) - _rank(d_top_above)

    d_bot = boundary_matrix(x, grade, BOTTOM)
    d_bot_above = boundary_matrix(x, (k, l + 1), BOTTOM)
    bottom = (n - _rank(d_bot)) - _rank(d_bot_above)

    agree = True
    if cross_check:
        agree = top == _laplacian_nullity(x, grade, TOP) and bottom == _laplacian_nullity(
            x, grade, BOTTOM
        )
    return BettiVector(top, bottom, agree)


def cross_betti_table(
    m: Multicomplex, grades: Sequence[Grade] = DEFAULT_TABLE_GRADES
) -> dict[tuple[int, int], dict[Grade, BettiVector]]:
    """Cross-Betti vectors for every layer pair of a multicomplex."""
    table: dict[tuple[int, int], dict[Grade, BettiVector]] = {}
    for s, t in m.layer_pairs():
        x = m.bicomplex(s, t)
        table[(s, t)] = {g: betti_vector(x, g) for g in grades}
    return table


# --- cones and kites ------------------------------------------------------

@dataclass(frozen=True)
class Kite:
    """A chain of cross-triangles through one apex of the opposite layer."""

    spine: tuple[int, ...]
    apex: int
    apex_side: str


@dataclass(frozen=True)
class Cone:
    """Two cross-edges to a common apex whose triple is not a kite boundary."""

    base: tuple[int, int]
    apex: int
    base_side: str
    closed: bool


def _cross_neighbourhoods(x: Bicomplex, apex_side: str):
    """Per apex vertex: the opposite-layer vertices it crosses to, plus the
    kite-graph edges among them (pairs forming a cross-triangle with the
    apex)."""
    nbrs: dict[int, set[int]] = {}
    for edge in x.crossimplices((0, 0)):
        u, v = edge.top[0], edge.bottom[0]
        apex, base = (v, u) if apex_side == BOTTOM else (u, v)
        nbrs.setdefault(apex, set()).add(base)
    tri_grade = (1, 0) if apex_side == BOTTOM else (0, 1)
    kite_edges: dict[int, set[tuple[int, int]]] = {apex: set() for apex in nbrs}
    for tri in x.crossimplices(tri_grade):
        if apex_side == BOTTOM:
            apex, pair = tri.bottom[0], tri.top
        else:
            apex, pair = tri.top[0], tri.bottom
        kite_edges[apex].add(pair)
    return nbrs, kite_edges


def enumerate_kites(
    x: Bicomplex, apex_side: str, max_len: int | None = None
) -> list[Kite]:
    """All kites with apex in the given layer, deduplicated up to spine
    reversal.

    A kite spine is a simple path in the per-apex kite graph whose
    consecutive pairs each form a cross-triangle with the apex; every
    sub-path of a kite is again a kite and is listed.  ``max_len`` bounds
    the spine length (number of spine vertices, at least 2).
    """
    if max_len is not None and max_len < 2:
        raise ValueError("max_len must be at least 2")
    _, kite_edges = _cross_neighbourhoods(x, apex_side)
    out: list[Kite] = []
    for apex in sorted(kite_edges):
        adj: dict[int, set[int]] = {}
        for u, v in kite_edges[apex]:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        spines: set[tuple[int, ...]] = set()

        def walk(path: tuple[int, ...]):
            if len(path) >= 2:
                spines.add(min(path, path[::-1]))
            if max_len is not None and len(path) >= max_len:
                return
            for nxt in sorted(adj.get(path[-1], ())):
                if nxt not in path:
                    walk(path + (nxt,))

        for start in sorted(adj):
            walk((start,))
        out.extend(Kite(spine, apex, apex_side) for spine in sorted(spines))
    return out


def _horizontal_components(x: Bicomplex, side: str) -> dict[int, int]:
    """Connected-component label per vertex of one horizontal 1-skeleton."""
    if side == TOP:
        vertices = x.v1
        edges = [a.top for a in x.crossimplices((1, -1))]
    else:
        vertices = x.v2
        edges = [a.bottom for a in x.crossimplices((-1, 1))]
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        parent[find(u)] = find(v)
    return {v: find(v) for v in vertices}


def enumerate_cones(x: Bicomplex, base_side: str) -> list[Cone]:
    """Generating cones with base in the given layer.

    For each apex of the opposite layer, the vertices it crosses to are
    grouped into kite-connected components; vertices in one component are
    joined by a kite through the apex, so their cross-edge differences
    are homologous and only component pairs carry independent cones.
    Components are ordered by smallest member and consecutive pairs are
    reported, with base ``(max of earlier component, min of later one)``.
    A cone is closed when its base vertices are joined by a path in their
    horizontal 1-skeleton.
    """
    apex_side = BOTTOM if base_side == TOP else TOP
    nbrs, kite_edges = _cross_neighbourhoods(x, apex_side)
    horiz = _horizontal_components(x, base_side)
    out: list[Cone] = []
    for apex in sorted(nbrs):
        parent = {v: v for v in nbrs[apex]}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u, v in kite_edges.get(apex, ()):
            parent[find(u)] = find(v)
        components: dict[int, list[int]] = {}
        for v in nbrs[apex]:
            components.setdefault(find(v), []).append(v)
        ordered = sorted((sorted(members) for members in components.values()))
        for earlier, later in zip(ordered, ordered[1:]):
            base = (earlier[-1], later[0])
            closed = horiz[base[0]] == horiz[base[1]]
            out.append(Cone(base, apex, base_side, closed))
    return out


def cone_cross_cycle(
    cone: Cone, basis: ChainBasis
) -> np.ndarray:
    """Coefficient vector of the cone's cross-cycle in a cross-edge basis.

    The cycle is the difference of the two cross-edges joining the base
    vertices to the apex; it lies in the kernel of the side's boundary
    operator at grade (0, 0).
    """
    vec = np.zeros(len(basis))
    u, v = cone.base
    if cone.base_side == TOP:
        first, second = Crossimplex((u,), (cone.apex,)), Crossimplex((v,), (cone.apex,))
    else:
        first, second = Crossimplex((cone.apex,), (u,)), Crossimplex((cone.apex,), (v,))
    vec[basis.index[second]] = 1.0
    vec[basis.index[first]] = -1.0
    return vec
