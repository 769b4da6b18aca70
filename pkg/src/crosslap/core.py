"""Combinatorial model of two-layer simplicial structures.

A crossimplex joins a sorted tuple of top-layer vertices with a sorted
tuple of bottom-layer vertices; its grade ``(k, l)`` counts ``k + 1``
top and ``l + 1`` bottom vertices and its dimension is ``k + l + 1``.
A bicomplex is a collection of crossimplices closed under taking
crossfaces, together with a positive weight map.  This module owns
construction (closure, clique pairing, skeletons), validation, degrees,
and adjacency; boundary operators, homology, and spectra live in
:mod:`crosslap.homology` and :mod:`crosslap.spectral`.

Canonical orientation is strictly increasing vertex ids within each
layer.  User-supplied orderings are reduced to canonical form with a
tracked permutation sign, so every stored crossimplex has exactly one
representation.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import (
    DegenerateSimplex,
    EmptySimplex,
    GradeMismatch,
    InvalidWeight,
    UnknownLayer,
    UnknownSimplex,
    UnknownVertex,
)

TOP = "T"
BOTTOM = "B"

Grade = tuple[int, int]


class Crossimplex(NamedTuple):
    """A canonically oriented crossimplex: two strictly increasing vertex tuples."""

    top: tuple[int, ...]
    bottom: tuple[int, ...]

    @property
    def grade(self) -> Grade:
        return (len(self.top) - 1, len(self.bottom) - 1)

    @property
    def dim(self) -> int:
        return len(self.top) + len(self.bottom) - 1

    def __str__(self) -> str:
        t = ",".join(map(str, self.top))
        b = ",".join(map(str, self.bottom))
        return f"[{t};{b}]"


def _sorted_with_parity(vertices: Iterable[int]) -> tuple[tuple[int, ...], int]:
    """Sort a vertex list, returning the tuple and the permutation parity."""
    seq = list(vertices)
    if len(set(seq)) != len(seq):
        raise DegenerateSimplex(f"repeated vertex in {seq}")
    inversions = sum(
        1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j]
    )
    return tuple(sorted(seq)), (-1) ** inversions


def make_crossimplex(
    top: Iterable[int], bottom: Iterable[int]
) -> tuple[Crossimplex, int]:
    """Canonicalize an oriented crossimplex.

    Returns the sorted crossimplex together with the sign of the sorting
    permutation (product of the per-layer parities), so that oriented
    input chains map into the canonical basis with the correct sign.
    """
    t, sign_t = _sorted_with_parity(top)
    b, sign_b = _sorted_with_parity(bottom)
    if not t and not b:
        raise EmptySimplex("a crossimplex needs at least one vertex")
    return Crossimplex(t, b), sign_t * sign_b


def crossfaces(a: Crossimplex) -> list[tuple[Crossimplex, int, str]]:
    """All crossfaces of ``a`` as ``(face, sign, side)`` triples.

    Dropping the vertex at position ``i`` carries sign ``(-1)**i``; top
    faces come first.  Faces that would be the empty crossimplex (the
    single vertex of a pure horizontal vertex) are omitted.
    """
    faces: list[tuple[Crossimplex, int, str]] = []
    if len(a.top) >= 1 and (len(a.top) > 1 or a.bottom):
        for i in range(len(a.top)):
            face = Crossimplex(a.top[:i] + a.top[i + 1 :], a.bottom)
            faces.append((face, (-1) ** i, TOP))
    if len(a.bottom) >= 1 and (len(a.bottom) > 1 or a.top):
        for i in range(len(a.bottom)):
            face = Crossimplex(a.top, a.bottom[:i] + a.bottom[i + 1 :])
            faces.append((face, (-1) ** i, BOTTOM))
    return faces


def top_crossfaces(a: Crossimplex) -> list[tuple[Crossimplex, int]]:
    return [(f, s) for f, s, side in crossfaces(a) if side == TOP]


def bottom_crossfaces(a: Crossimplex) -> list[tuple[Crossimplex, int]]:
    return [(f, s) for f, s, side in crossfaces(a) if side == BOTTOM]


@dataclass(frozen=True)
class Weighting:
    """Positive weights on crossimplices; absent keys default to 1.

    Positivity is enforced by the constructors that accept user input
    (:func:`close`, the file parsers); :func:`validate` reports stored
    non-positive values as violations rather than raising.
    """

    values: Mapping[Crossimplex, float] = field(default_factory=dict)

    def __call__(self, a: Crossimplex) -> float:
        return self.values.get(a, 1.0)

    def restricted(self, keep) -> "Weighting":
        return Weighting({a: w for a, w in self.values.items() if keep(a)})


@dataclass(frozen=True)
class Bicomplex:
    """An immutable crossface-closed collection of crossimplices.

    ``grades`` maps ``(k, l)`` to the set of stored crossimplices of that
    grade; the vertex grades ``(0, -1)`` and ``(-1, 0)`` mirror ``v1`` and
    ``v2``.  Instances are built by :func:`close`,
    :func:`cross_clique_bicomplex`, or the diffusion constructor, all of
    which guarantee closure.
    """

    v1: frozenset[int]
    v2: frozenset[int]
    grades: Mapping[Grade, frozenset[Crossimplex]]
    weights: Weighting = field(default_factory=Weighting)

    def crossimplices(self, grade: Grade) -> frozenset[Crossimplex]:
        return self.grades.get(grade, frozenset())

    def __contains__(self, a: Crossimplex) -> bool:
        return a in self.crossimplices(a.grade)

    def __iter__(self):
        for grade in self.grades_present():
            yield from sorted(self.grades[grade])

    def grades_present(self) -> list[Grade]:
        return sorted(g for g, s in self.grades.items() if s)

    @property
    def dim(self) -> int:
        present = self.grades_present()
        return max((k + l + 1 for k, l in present), default=0)

    def weight(self, a: Crossimplex) -> float:
        return self.weights(a)

    def n_crossimplices(self) -> int:
        return sum(len(s) for s in self.grades.values())


def _freeze_grades(
    grades: Mapping[Grade, Iterable[Crossimplex]],
) -> dict[Grade, frozenset[Crossimplex]]:
    return {g: frozenset(s) for g, s in grades.items() if s}


def close(
    seed: Iterable[Crossimplex | tuple[Crossimplex, float]],
    *,
    v1: Iterable[int] = (),
    v2: Iterable[int] = (),
) -> Bicomplex:
    """Smallest bicomplex containing the seed crossimplices.

    Crossfaces are added until fixpoint.  Seed entries may carry an
    explicit weight; generated faces default to weight 1.  ``v1``/``v2``
    declare isolated vertices, which closure cannot invent.
    """
    weights: dict[Crossimplex, float] = {}
    todo: list[Crossimplex] = []
    for item in seed:
        if isinstance(item, Crossimplex):
            a = item
        else:
            a, w = item
            if not w > 0:
                raise InvalidWeight(f"weight {w} on {a}")
            if w != 1.0:
                weights[a] = float(w)
        todo.append(a)

    seen: set[Crossimplex] = set()
    while todo:
        a = todo.pop()
        if a in seen:
            continue
        seen.add(a)
        for face, _, _ in crossfaces(a):
            if face not in seen:
                todo.append(face)

    tops = set(v1)
    bottoms = set(v2)
    for a in seen:
        tops.update(a.top)
        bottoms.update(a.bottom)
    for v in tops:
        seen.add(Crossimplex((v,), ()))
    for v in bottoms:
        seen.add(Crossimplex((), (v,)))

    grades: dict[Grade, set[Crossimplex]] = {}
    for a in seen:
        grades.setdefault(a.grade, set()).add(a)
    return Bicomplex(
        frozenset(tops), frozenset(bottoms), _freeze_grades(grades), Weighting(weights)
    )


# --- validation ---------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    subject: object
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind}({self.subject})" + (f": {self.detail}" if self.detail else "")


def validate(x: Bicomplex) -> list[Violation]:
    """Check closure, canonical form, weights, and grade consistency.

    Returns a list of violations; an empty list means the bicomplex is
    well formed.  Violations are data, not exceptions.
    """
    out: list[Violation] = []
    for grade, simplices in x.grades.items():
        for a in simplices:
            if a.grade != grade:
                out.append(Violation("GradeMismatch", a, f"stored under {grade}"))
            if any(u >= v for u, v in zip(a.top, a.top[1:])) or any(
                u >= v for u, v in zip(a.bottom, a.bottom[1:])
            ):
                out.append(Violation("NonCanonical", a))
            if not a.top and not a.bottom:
                out.append(Violation("EmptySimplex", a))
            for v in a.top:
                if v not in x.v1:
                    out.append(Violation("UnknownVertex", a, f"top vertex {v}"))
            for v in a.bottom:
                if v not in x.v2:
                    out.append(Violation("UnknownVertex", a, f"bottom vertex {v}"))
            for face, _, _ in crossfaces(a):
                if face not in x:
                    out.append(Violation("MissingFace", face, f"face of {a}"))
    for a, w in x.weights.values.items():
        if not w > 0:
            out.append(Violation("InvalidWeight", a, f"weight {w}"))
    return out


# --- clique construction ------------------------------------------------

def _adjacency(nodes: set[int], edges: Iterable[tuple[int, int]]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in nodes}
    for u, v in edges:
        if u == v:
            continue
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _cliques_up_to(adj: dict[int, set[int]], max_size: int) -> list[tuple[int, ...]]:
    """All cliques with 1..max_size vertices, as sorted tuples."""
    out: list[tuple[int, ...]] = []

    def grow(clique: tuple[int, ...], candidates: set[int]):
        out.append(clique)
        if len(clique) == max_size:
            return
        for v in sorted(candidates):
            grow(clique + (v,), candidates & adj[v] & {u for u in candidates if u > v})

    for v in sorted(adj):
        grow((v,), {u for u in adj[v] if u > v})
    return out


def cross_clique_bicomplex(
    top_nodes: Iterable[int],
    top_edges: Iterable[tuple[int, int]],
    bottom_nodes: Iterable[int],
    bottom_edges: Iterable[tuple[int, int]],
    interlinks: Iterable[tuple[int, int]],
    max_dim: int = 2,
) -> Bicomplex:
    """Cross-clique bicomplex of a two-layer network.

    A grade-``(k, l)`` crossimplex pairs a ``(k+1)``-clique of the top
    graph with an ``(l+1)``-clique of the bottom graph such that every
    top/bottom vertex pair is an interlayer link.  Pure horizontal
    cliques (``l = -1`` or ``k = -1``) are always included.  Only
    crossimplices of dimension at most ``max_dim`` are kept.
    """
    tops = set(top_nodes)
    bottoms = set(bottom_nodes)
    inter: dict[int, set[int]] = {v: set() for v in tops}
    for u, v in interlinks:
        if u not in tops:
            raise UnknownVertex(f"interlink references unknown top vertex {u}")
        if v not in bottoms:
            raise UnknownVertex(f"interlink references unknown bottom vertex {v}")
        inter[u].add(v)

    adj1 = _adjacency(tops, top_edges)
    adj2 = _adjacency(bottoms, bottom_edges)
    # dimension of (k, l) is k + l + 1, so a pure horizontal k-clique tuple
    # has up to max_dim + 1 vertices
    cliques1 = _cliques_up_to(adj1, max_dim + 1)
    cliques2 = _cliques_up_to(adj2, max_dim + 1)

    grades: dict[Grade, set[Crossimplex]] = {}

    def put(a: Crossimplex):
        grades.setdefault(a.grade, set()).add(a)

    # horizontal (k, -1) and (-1, l) crossimplices have dimension k and l
    for sigma in cliques1:
        if len(sigma) - 1 <= max_dim:
            put(Crossimplex(sigma, ()))
    for sigma in cliques2:
        if len(sigma) - 1 <= max_dim:
            put(Crossimplex((), sigma))

    for sigma1 in cliques1:
        common = set.intersection(*(inter[u] for u in sigma1))
        if not common:
            continue
        for sigma2 in cliques2:
            if len(sigma1) + len(sigma2) - 1 > max_dim:
                continue
            if all(v in common for v in sigma2):
                put(Crossimplex(sigma1, sigma2))

    return Bicomplex(frozenset(tops), frozenset(bottoms), _freeze_grades(grades))


def skeleton(x: Bicomplex, n: int) -> Bicomplex:
    """Restriction to crossimplices of dimension at most ``n``."""
    if n < 0:
        raise ValueError("skeleton dimension must be non-negative")
    grades = {
        g: s for g, s in x.grades.items() if g[0] + g[1] + 1 <= n
    }
    kept = {a for s in grades.values() for a in s}
    return Bicomplex(x.v1, x.v2, _freeze_grades(grades), x.weights.restricted(kept.__contains__))


# --- degrees and adjacency ----------------------------------------------

class Degrees(NamedTuple):
    to: float
    ti: float
    bo: float
    bi: float


def _is_top_face(face: Crossimplex, parent: Crossimplex) -> bool:
    return face.bottom == parent.bottom and set(face.top) < set(parent.top)


def _is_bottom_face(face: Crossimplex, parent: Crossimplex) -> bool:
    return face.top == parent.top and set(face.bottom) < set(parent.bottom)


def degrees(x: Bicomplex, a: Crossimplex) -> Degrees:
    """Weighted TO/TI/BO/BI degrees of a crossimplex.

    TO (resp. BO) sums the weights of the grade-above crossimplices that
    contain ``a`` in their top (resp. bottom) cross-boundary; TI
    (resp. BI) sums reciprocal weights of the top (resp. bottom)
    crossfaces of ``a``.  With unit weights TI and BI reduce to the face
    counts ``k + 1`` and ``l + 1`` whenever those faces exist.
    """
    if a not in x:
        raise UnknownSimplex(str(a))
    k, l = a.grade
    to = sum(x.weight(p) for p in x.crossimplices((k + 1, l)) if _is_top_face(a, p))
    bo = sum(x.weight(p) for p in x.crossimplices((k, l + 1)) if _is_bottom_face(a, p))
    ti = sum(1.0 / x.weight(f) for f, _ in top_crossfaces(a))
    bi = sum(1.0 / x.weight(f) for f, _ in bottom_crossfaces(a))
    return Degrees(to, ti, bo, bi)


def adjacency(x: Bicomplex, a: Crossimplex, b: Crossimplex) -> dict[str, Crossimplex]:
    """Adjacency relations between two same-grade crossimplices.

    Returns a map from relation name to witness: ``TO``/``BO`` carry the
    shared parent, ``TI``/``BI`` the shared crossface.  Witnesses are
    unique when they exist.
    """
    if a.grade != b.grade:
        raise GradeMismatch(f"{a} vs {b}")
    if a == b:
        return {}
    out: dict[str, Crossimplex] = {}
    k, l = a.grade

    if a.bottom == b.bottom:
        union = tuple(sorted(set(a.top) | set(b.top)))
        if len(union) == k + 2:
            parent = Crossimplex(union, a.bottom)
            if parent in x:
                out["TO"] = parent
        inter = tuple(sorted(set(a.top) & set(b.top)))
        if len(inter) == k:
            face = Crossimplex(inter, a.bottom)
            if face in x and (inter or a.bottom):
                out["TI"] = face
    if a.top == b.top:
        union = tuple(sorted(set(a.bottom) | set(b.bottom)))
        if len(union) == l + 2:
            parent = Crossimplex(a.top, union)
            if parent in x:
                out["BO"] = parent
        inter = tuple(sorted(set(a.bottom) & set(b.bottom)))
        if len(inter) == l:
            face = Crossimplex(a.top, inter)
            if face in x and (inter or a.top):
                out["BI"] = face
    return out


# --- multicomplexes ------------------------------------------------------

def transpose(x: Bicomplex) -> Bicomplex:
    """Swap the two layers of a bicomplex."""
    grades: dict[Grade, set[Crossimplex]] = {}
    for (k, l), simplices in x.grades.items():
        grades[(l, k)] = {Crossimplex(a.bottom, a.top) for a in simplices}
    weights = Weighting(
        {Crossimplex(a.bottom, a.top): w for a, w in x.weights.values.items()}
    )
    return Bicomplex(x.v2, x.v1, _freeze_grades(grades), weights)


@dataclass(frozen=True)
class Multicomplex:
    """A family of bicomplexes indexed by ordered layer pairs.

    Undirected multicomplexes store only pairs ``(s, t)`` with ``s < t``
    and derive the mirror pair by swapping top and bottom.
    """

    layers: Mapping[int, frozenset[int]]
    pairs: Mapping[tuple[int, int], Bicomplex]
    undirected: bool = True

    def __post_init__(self):
        for (s, t), x in self.pairs.items():
            if s not in self.layers or t not in self.layers:
                raise UnknownLayer(f"pair ({s},{t}) references unknown layer")
            if x.v1 != self.layers[s] or x.v2 != self.layers[t]:
                raise ValueError(
                    f"bicomplex ({s},{t}) vertex sets do not match its layers"
                )

    def layer_pairs(self) -> list[tuple[int, int]]:
        if not self.undirected:
            return sorted(self.pairs)
        out = []
        for s, t in sorted(self.pairs):
            out.extend([(s, t), (t, s)])
        return sorted(out)

    def bicomplex(self, s: int, t: int) -> Bicomplex:
        if (s, t) in self.pairs:
            return self.pairs[(s, t)]
        if self.undirected and (t, s) in self.pairs:
            return transpose(self.pairs[(t, s)])
        raise UnknownLayer(f"no bicomplex for layer pair ({s},{t})")
