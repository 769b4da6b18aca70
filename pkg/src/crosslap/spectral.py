"""Cross-Laplacian assembly, spectra, cross-hubs, and spectral persistence.

The top (resp. bottom) Laplacian at a grade is the self-adjoint operator
``d*d + dd*`` built from the top (resp. bottom) coboundaries under the
weighted inner product on cross-forms.  Matrices here are the
weight-symmetrized similarity transform ``W^(1/2) L W^(-1/2)`` of the
elementary-basis operator: symmetric positive semidefinite for every
weight map, with the same spectrum, and equal to the elementary-basis
matrix whenever all weights are 1.

Two independent assembly routes are provided: :func:`laplacian` builds
entries combinatorially from degrees and adjacency witnesses, while
:func:`laplacian_from_boundaries` multiplies explicit boundary matrices
with weight diagonals.  They must agree entrywise and the test suite
holds them to 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

from .core import BOTTOM, TOP, Bicomplex, Crossimplex, Grade
from .errors import (
    EigenFailure,
    EmptyGrade,
    FullSpectrumUnavailable,
    UnsupportedGrade,
)
from .homology import ChainBasis, SignedSparseMatrix, boundary_matrix, chain_basis

# kernel membership and nonzero-intensity threshold
TOL_ZERO = 1e-8
# relative eigenvalue gap closing a stage
TOL_GROUP = 1e-9
# largest connected block handed to the dense symmetric solver
DENSE_LIMIT = 2000
# eigenpair residual contract, relative to max(1, lambda_max)
RESIDUAL_TOL = 1e-8

INTENSITY_RULES = ("max", "l1", "projector")


def coboundary_matrix(x: Bicomplex, grade: Grade, side: str) -> SignedSparseMatrix:
    """Coboundary at ``grade``: the transpose of the boundary matrix one
    step above, in the self-dual elementary basis.

    The weighted adjoint (entries scaled by ``w(parent)/w(face)``) is
    formed internally during Laplacian assembly.
    """
    k, l = grade
    above = (k + 1, l) if side == TOP else (k, l + 1)
    d = boundary_matrix(x, above, side)
    entries = tuple((j, i, v) for i, j, v in d.entries)
    return SignedSparseMatrix(d.cols, d.rows, entries)


@dataclass(frozen=True)
class Laplacian:
    """A symmetric PSD cross-Laplacian matrix labeled by crossimplices."""

    grade: Grade
    part: str
    basis: ChainBasis
    matrix: sp.csr_matrix


def _weight_vector(x: Bicomplex, basis: ChainBasis) -> np.ndarray:
    return np.array([x.weight(a) for a in basis.simplices])


def laplacian(x: Bicomplex, grade: Grade, part: str) -> Laplacian:
    """Assemble the top or bottom cross-Laplacian at ``grade`` entrywise.

    Diagonal entries are ``deg_out(a)/w(a) + w(a) * deg_in(a)`` for the
    side's outer/inner degrees.  Off-diagonal entries combine the shared
    parent (weight ``w(c)``) and shared face (weight ``w(d)``) witnesses
    with signs given by the orientation products, so that with unit
    weights two cross-edges sharing a vertex contribute 1 exactly when no
    cross-triangle contains them both.
    """
    basis = chain_basis(x, grade)
    n = len(basis)
    if n == 0:
        raise EmptyGrade(f"no crossimplices at grade {grade}")
    k, l = grade
    if part == TOP:
        above, faces_key = (k + 1, l), TOP
    else:
        above, faces_key = (k, l + 1), BOTTOM

    d_here = boundary_matrix(x, grade, faces_key)
    d_above = boundary_matrix(x, above, faces_key)
    w = _weight_vector(x, basis)
    w_face = _weight_vector(x, d_here.rows)
    w_parent = _weight_vector(x, d_above.cols)

    # face -> [(basis index, sign)]; parent -> [(basis index, sign)]
    by_face: dict[int, list[tuple[int, int]]] = {}
    for i, j, s in d_here.entries:
        by_face.setdefault(i, []).append((j, s))
    by_parent: dict[int, list[tuple[int, int]]] = {}
    for i, j, s in d_above.entries:
        by_parent.setdefault(j, []).append((i, s))

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []

    deg_out = np.zeros(n)
    for p, members in by_parent.items():
        wp = w_parent[p]
        for a, _ in members:
            deg_out[a] += wp
        for idx, (a, sa) in enumerate(members):
            for b, sb in members[idx + 1 :]:
                v = wp * sa * sb / np.sqrt(w[a] * w[b])
                rows.extend((a, b))
                cols.extend((b, a))
                vals.extend((v, v))

    deg_in = np.zeros(n)
    for f, members in by_face.items():
        wf = w_face[f]
        for a, _ in members:
            deg_in[a] += 1.0 / wf
        for idx, (a, sa) in enumerate(members):
            for b, sb in members[idx + 1 :]:
                v = np.sqrt(w[a] * w[b]) * sa * sb / wf
                rows.extend((a, b))
                cols.extend((b, a))
                vals.extend((v, v))

    for a in range(n):
        rows.append(a)
        cols.append(a)
        vals.append(deg_out[a] / w[a] + w[a] * deg_in[a])

    matrix = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    matrix.eliminate_zeros()
    return Laplacian(grade, part, basis, matrix)


def laplacian_from_boundaries(x: Bicomplex, grade: Grade, part: str) -> Laplacian:
    """Assemble the same matrix as :func:`laplacian` by multiplying
    boundary matrices with weight diagonals."""
    basis = chain_basis(x, grade)
    n = len(basis)
    if n == 0:
        raise EmptyGrade(f"no crossimplices at grade {grade}")
    k, l = grade
    side = part
    above = (k + 1, l) if part == TOP else (k, l + 1)

    d_here = boundary_matrix(x, grade, side)
    d_above = boundary_matrix(x, above, side)
    w = _weight_vector(x, basis)
    w_face = _weight_vector(x, d_here.rows)
    w_parent = _weight_vector(x, d_above.cols)

    sqrt_w = sp.diags(np.sqrt(w))
    inv_sqrt_w = sp.diags(1.0 / np.sqrt(w))
    b_up = d_above.tocsr()
    b_down = d_here.tocsr()
    up = inv_sqrt_w @ b_up @ sp.diags(w_parent) @ b_up.T @ inv_sqrt_w
    down = sqrt_w @ b_down.T @ sp.diags(1.0 / w_face) @ b_down @ sqrt_w
    return Laplacian(grade, part, basis, (up + down).tocsr())


# --- eigendecomposition ---------------------------------------------------

@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending spectrum with orthonormal, sign-fixed eigenvectors.

    In extremal mode (``full_spectrum=False``) only the kernel and the
    top-eigenvalue stage are present.
    """

    basis: ChainBasis
    values: np.ndarray
    vectors: np.ndarray
    full_spectrum: bool = True


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Largest-magnitude coordinate of each column made positive; ties
    resolved toward the lowest index."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        lead = int(np.argmax(np.abs(out[:, j])))
        if out[lead, j] < 0:
            out[:, j] = -out[:, j]
    return out


def _check_residuals(matrix, values, vectors, scale):
    resid = matrix @ vectors - vectors * values
    worst = float(np.max(np.abs(resid))) if resid.size else 0.0
    if worst > RESIDUAL_TOL * scale:
        raise EigenFailure(f"residual {worst:.3e} exceeds contract at scale {scale:.3e}")


def _dense_eigh(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(block)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"dense eigensolver failed: {exc}") from exc


def _extremal_block(block: sp.csc_matrix, scale_bound: float):
    """Kernel and top-stage eigenpairs of one large sparse block.

    ``scale_bound`` must dominate the global largest eigenvalue (a
    Gershgorin bound works); the returned batches then provably cover the
    kernel and top-stage windows used by the caller.
    """
    n = block.shape[0]
    v0 = np.full(n, 1.0 / np.sqrt(n))
    budget = min(n - 2, 512)

    def grow(which_fn, stop_fn, what):
        k = 8
        while True:
            k = min(k, budget)
            try:
                vals, vecs = which_fn(k)
            except spla.ArpackNoConvergence as exc:
                raise EigenFailure(f"ARPACK did not converge at k={k}: {exc}") from exc
            if stop_fn(vals):
                return vals, vecs
            if k >= budget:
                raise EigenFailure(
                    f"{what} dimension exceeds the iterative budget ({budget}) "
                    f"on a block of size {n}"
                )
            k *= 2

    top_vals, top_vecs = grow(
        lambda k: spla.eigsh(block, k=k, which="LA", v0=v0),
        lambda vals: vals.min() < vals.max() - 10 * TOL_GROUP * scale_bound,
        "top stage",
    )
    lam_max = float(top_vals.max())

    low_vals, low_vecs = grow(
        lambda k: spla.eigsh(block, k=k, sigma=-1e-3 * scale_bound, which="LM", v0=v0),
        lambda vals: vals.max() > TOL_ZERO * scale_bound,
        "kernel",
    )
    return (low_vals, low_vecs), (top_vals, top_vecs), lam_max


def eig(lap: Laplacian, *, dense_limit: int = DENSE_LIMIT) -> EigenDecomposition:
    """Eigendecomposition of a cross-Laplacian.

    The matrix is split into connected blocks; blocks up to
    ``dense_limit`` go through the dense symmetric solver.  If any block
    is larger, only the kernel and the top eigenvalue stage are computed
    (iteratively) and the result is flagged ``full_spectrum=False``.
    Output is deterministic for identical input: fixed solver, stable
    eigenvalue ordering, and a fixed eigenvector sign convention.
    """
    matrix = lap.matrix
    n = matrix.shape[0]
    asym = abs(matrix - matrix.T).max() if matrix.nnz else 0.0
    if asym > 1e-12 * max(1.0, abs(matrix).max()):
        raise EigenFailure(f"matrix is not symmetric (asymmetry {asym:.3e})")

    n_comp, labels = csgraph.connected_components(matrix, directed=False)
    comps = [np.flatnonzero(labels == c) for c in range(n_comp)]
    largest = max(len(c) for c in comps)

    if largest <= dense_limit:
        values = np.empty(n)
        vectors = np.zeros((n, n))
        col = 0
        lam_max = 0.0
        for idx in comps:
            block = matrix[np.ix_(idx, idx)].toarray()
            vals, vecs = _dense_eigh(block)
            m = len(idx)
            values[col : col + m] = vals
            vectors[np.ix_(idx, range(col, col + m))] = vecs
            lam_max = max(lam_max, float(vals[-1]))
            col += m
        order = np.argsort(values, kind="stable")
        values = values[order]
        vectors = _fix_signs(vectors[:, order])
        _check_residuals(matrix, values, vectors, max(1.0, lam_max))
        return EigenDecomposition(lap.basis, values, vectors)

    # extremal mode: kernel and top stage only.  The Gershgorin bound
    # dominates lambda_max, so the per-block batches cover both windows.
    gersh = max(1.0, float(np.max(abs(matrix).sum(axis=1))))
    lam_max = 0.0
    partial: list[tuple] = []
    for idx in comps:
        block = matrix[np.ix_(idx, idx)]
        if len(idx) <= max(dense_limit, 16):
            vals, vecs = _dense_eigh(block.toarray())
            lam_max = max(lam_max, float(vals[-1]))
            partial.append(("full", idx, vals, vecs))
        else:
            low, top, block_max = _extremal_block(block.tocsc(), gersh)
            lam_max = max(lam_max, block_max)
            partial.append(("split", idx, low, top))

    scale = max(1.0, lam_max)
    low_cut = TOL_ZERO * scale
    top_cut = lam_max - TOL_GROUP * scale
    keep_vals: list[float] = []
    keep_vecs: list[np.ndarray] = []

    def keep(idx, vals, vecs, mask):
        for j in np.flatnonzero(mask):
            full = np.zeros(n)
            full[idx] = vecs[:, j]
            keep_vals.append(float(vals[j]))
            keep_vecs.append(full)

    for entry in partial:
        if entry[0] == "full":
            _, idx, vals, vecs = entry
            keep(idx, vals, vecs, (vals <= low_cut) | (vals >= top_cut))
        else:
            # the two batches may overlap; mask each batch by its own
            # window, and keep overlap values out of the top batch, so no
            # eigenpair enters twice
            _, idx, (lv, lw), (tv, tw) = entry
            keep(idx, lv, lw, lv <= low_cut)
            keep(idx, tv, tw, (tv >= top_cut) & (tv > low_cut))

    order = np.argsort(keep_vals, kind="stable")
    values = np.array([keep_vals[i] for i in order])
    vectors = _fix_signs(np.column_stack([keep_vecs[i] for i in order]))
    _check_residuals(matrix, values, vectors, scale)
    return EigenDecomposition(lap.basis, values, vectors, full_spectrum=False)


# --- stages, intensities, hubs --------------------------------------------

@dataclass(frozen=True)
class Stage:
    """One eigenvalue group of a decomposition."""

    decomposition: EigenDecomposition
    index: int
    value: float
    members: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


def stage_partition(
    decomp: EigenDecomposition, tol_group: float = TOL_GROUP
) -> list[Stage]:
    """Group the ascending eigenvalues into maximal runs where consecutive
    values differ by at most ``tol_group * max(1, lambda_max)``."""
    values = decomp.values
    if len(values) == 0:
        return []
    gap = tol_group * max(1.0, float(values[-1]))
    stages: list[Stage] = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > gap:
            members = tuple(range(start, i))
            stages.append(
                Stage(decomp, len(stages), float(values[start:i].mean()), members)
            )
            start = i
    return stages


def edge_intensities(
    stage: Stage, rule: str = "max", tol_zero: float = TOL_ZERO
) -> dict[Crossimplex, float]:
    """Per-crossimplex intensity of a stage.

    ``max`` takes the largest absolute coordinate over the stage's
    eigenvectors, ``l1`` their sum, and ``projector`` the square root of
    the eigenspace projector diagonal (basis independent).  Values at or
    below ``tol_zero`` are reported as 0.
    """
    if rule not in INTENSITY_RULES:
        raise ValueError(f"unknown intensity rule {rule!r}")
    block = stage.decomposition.vectors[:, list(stage.members)]
    if rule == "max":
        raw = np.max(np.abs(block), axis=1)
    elif rule == "l1":
        raw = np.sum(np.abs(block), axis=1)
    else:
        raw = np.sqrt(np.sum(block * block, axis=1))
    raw = np.where(raw > tol_zero, raw, 0.0)
    basis = stage.decomposition.basis
    return {a: float(v) for a, v in zip(basis.simplices, raw)}


def stage_projector_diagonal(stage: Stage) -> np.ndarray:
    """Diagonal of the orthogonal projector onto the stage's eigenspace."""
    block = stage.decomposition.vectors[:, list(stage.members)]
    return np.sum(block * block, axis=1)


def spectral_cross_hubs(
    stage: Stage, part: str, rule: str = "max", tol_zero: float = TOL_ZERO
) -> dict[int, float]:
    """Hubness per node at one stage.

    Cross-edges with nonzero intensity are grouped by their bottom vertex
    for part T (hubs live in the bottom layer) and by their top vertex for
    part B; hubness is the summed intensity of the group.  Only grade
    (0, 0) carries hub semantics.
    """
    basis = stage.decomposition.basis
    if basis.grade != (0, 0):
        raise UnsupportedGrade(f"cross-hubs are defined at grade (0, 0), not {basis.grade}")
    intensities = edge_intensities(stage, rule=rule, tol_zero=tol_zero)
    hubs: dict[int, float] = {}
    for edge, intensity in intensities.items():
        if intensity <= tol_zero:
            continue
        node = edge.bottom[0] if part == TOP else edge.top[0]
        hubs[node] = hubs.get(node, 0.0) + intensity
    return {node: hubs[node] for node in sorted(hubs)}


def _harmonic_stage(stages: list[Stage], tol_zero: float) -> Stage | None:
    if not stages:
        return None
    scale = max(1.0, float(stages[-1].decomposition.values[-1]))
    first = stages[0]
    return first if first.value <= tol_zero * scale else None


def harmonic_cross_hubs(
    x: Bicomplex, part: str, rule: str = "max", tol_zero: float = TOL_ZERO
) -> dict[int, float]:
    """Hubs of the zero-eigenvalue stage; empty when the kernel is trivial."""
    decomp = eig(laplacian(x, (0, 0), part))
    stage = _harmonic_stage(stage_partition(decomp), tol_zero)
    if stage is None:
        return {}
    return spectral_cross_hubs(stage, part, rule=rule, tol_zero=tol_zero)


def principal_cross_hubs(
    x: Bicomplex, part: str, rule: str = "max", tol_zero: float = TOL_ZERO
) -> dict[int, float]:
    """Hubs of the largest-eigenvalue stage."""
    decomp = eig(laplacian(x, (0, 0), part))
    stages = stage_partition(decomp)
    return spectral_cross_hubs(stages[-1], part, rule=rule, tol_zero=tol_zero)


# --- persistence ------------------------------------------------------------

@dataclass(frozen=True)
class PersistenceBars:
    """Stage-presence record of spectral cross-hubs.

    ``stages_present`` maps each node to the sorted stage indices at
    which it is a hub; bars are the maximal consecutive runs.  The
    ranking orders nodes by stage count (descending), then by later last
    stage, then by node id.
    """

    part: str
    n_stages: int
    stages_present: dict[int, tuple[int, ...]]
    ranking: tuple[int, ...]

    def bars(self, node: int) -> list[tuple[int, int]]:
        runs: list[tuple[int, int]] = []
        for idx in self.stages_present.get(node, ()):
            if runs and idx == runs[-1][1] + 1:
                runs[-1] = (runs[-1][0], idx)
            else:
                runs.append((idx, idx))
        return runs

    def all_bars(self) -> dict[int, list[tuple[int, int]]]:
        return {node: self.bars(node) for node in self.stages_present}


def _rank_nodes(stages_present: dict[int, tuple[int, ...]]) -> tuple[int, ...]:
    return tuple(
        sorted(
            stages_present,
            key=lambda v: (-len(stages_present[v]), -stages_present[v][-1], v),
        )
    )


def _stage_presence(stage_hubs: list[dict[int, float]]) -> dict[int, tuple[int, ...]]:
    present: dict[int, list[int]] = {}
    for idx, hubs in enumerate(stage_hubs):
        for node in hubs:
            present.setdefault(node, []).append(idx)
    return {node: tuple(stages) for node, stages in sorted(present.items())}


@dataclass(frozen=True)
class StageSummary:
    value: float
    multiplicity: int
    hubs: dict[int, float]


@dataclass(frozen=True)
class SpectralReport:
    """Spectrum, per-stage hubs, persistence bars, and hub ranking."""

    grade: Grade
    part: str
    eigenvalues: tuple[float, ...]
    stages: tuple[StageSummary, ...]
    bars: PersistenceBars | None
    ranking: tuple[int, ...]
    full_spectrum: bool

    def last_stage_of(self, node: int) -> int | None:
        for idx in range(len(self.stages) - 1, -1, -1):
            if node in self.stages[idx].hubs:
                return idx
        return None


def spectral_report(
    x: Bicomplex,
    part: str,
    *,
    rule: str = "max",
    tol_zero: float = TOL_ZERO,
    tol_group: float = TOL_GROUP,
    dense_limit: int = DENSE_LIMIT,
) -> SpectralReport:
    """Full grade-(0, 0) spectral analysis for one side.

    In extremal mode (a connected block larger than ``dense_limit``)
    only the harmonic and principal stages are computed; persistence bars
    are then unavailable and the ranking covers the two computed stages,
    which the report flags via ``full_spectrum=False``.
    """
    lap = laplacian(x, (0, 0), part)
    decomp = eig(lap, dense_limit=dense_limit)
    stages = stage_partition(decomp, tol_group=tol_group)
    stage_hubs = [
        spectral_cross_hubs(st, part, rule=rule, tol_zero=tol_zero) for st in stages
    ]
    presence = _stage_presence(stage_hubs)
    ranking = _rank_nodes(presence)
    bars = (
        PersistenceBars(part, len(stages), presence, ranking)
        if decomp.full_spectrum
        else None
    )
    return SpectralReport(
        grade=(0, 0),
        part=part,
        eigenvalues=tuple(float(v) for v in decomp.values),
        stages=tuple(
            StageSummary(st.value, st.multiplicity, hubs)
            for st, hubs in zip(stages, stage_hubs)
        ),
        bars=bars,
        ranking=ranking,
        full_spectrum=decomp.full_spectrum,
    )


def persistence_bars(x: Bicomplex, part: str, **kwargs) -> PersistenceBars:
    """Stage-presence bars over the full grade-(0, 0) spectrum."""
    report = spectral_report(x, part, **kwargs)
    if report.bars is None:
        raise FullSpectrumUnavailable(
            "persistence requires the full spectrum; a connected block exceeds "
            "the dense solver limit"
        )
    return report.bars
