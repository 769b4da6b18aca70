"""File formats and report serialization.

Bicomplex text format (JSON)::

    {
      "layers": {"1": [ids...], "2": [ids...]},
      "crossimplices": [{"top": [...], "bottom": [...], "weight": 2.0}, ...],
      "labels": {"1": {"0": "FRA"}, "2": {...}}        # optional, display only
    }

Closure is applied on load, so listing only maximal crossimplices is
enough; the "layers" section may declare isolated vertices that closure
cannot invent.

Multiplex edge-list format: whitespace-separated lines
``layer_id node_u node_v [weight]`` with 1-based ids; ``#`` starts a
comment.  The optional label file holds ``node_id label`` lines.

All writers are deterministic for fixed input: floats are emitted with 6
significant digits in CSV and with full repr in JSON, and files are
written atomically (temp file then rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Mapping
from pathlib import Path

from .core import Bicomplex, close, make_crossimplex, validate
from .diffusion import Multiplex, RankedHub
from .errors import InvalidWeight, ParseError, SelfLoop
from .homology import BettiVector
from .spectral import SpectralReport


def fmt(x: float) -> str:
    """CSV number format: 6 significant digits."""
    return f"{x:.6g}"


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write a file via temp-then-rename so failures leave no partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- bicomplex JSON ---------------------------------------------------------

def bicomplex_from_dict(data: dict) -> Bicomplex:
    try:
        layer_section = data.get("layers", {})
        v1 = [int(v) for v in layer_section.get("1", [])]
        v2 = [int(v) for v in layer_section.get("2", [])]
        entries = data["crossimplices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad bicomplex document: {exc}") from exc

    seed = []
    for pos, entry in enumerate(entries):
        try:
            top = [int(v) for v in entry.get("top", [])]
            bottom = [int(v) for v in entry.get("bottom", [])]
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad crossimplex at index {pos}: {exc}") from exc
        a, _ = make_crossimplex(top, bottom)
        weight = entry.get("weight", 1.0)
        if not isinstance(weight, (int, float)) or not weight > 0:
            raise InvalidWeight(f"weight {weight!r} on {a}")
        seed.append((a, float(weight)))
    return close(seed, v1=v1, v2=v2)


def bicomplex_labels_from_dict(data: dict) -> dict[str, dict[int, str]]:
    raw = data.get("labels", {})
    return {
        layer: {int(node): str(name) for node, name in mapping.items()}
        for layer, mapping in raw.items()
    }


def parse_bicomplex(path: str | Path) -> Bicomplex:
    """Load, close, and validate a bicomplex JSON file."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    x = bicomplex_from_dict(data)
    problems = validate(x)
    if problems:
        raise ParseError(
            f"{path}: invalid bicomplex: " + "; ".join(str(p) for p in problems[:5])
        )
    return x


def bicomplex_to_dict(x: Bicomplex) -> dict:
    simplices = sorted(
        (a for grade in x.grades.values() for a in grade),
        key=lambda a: (a.dim, a.grade, a),
    )
    entries = []
    for a in simplices:
        entry: dict = {"top": list(a.top), "bottom": list(a.bottom)}
        w = x.weight(a)
        if w != 1.0:
            entry["weight"] = w
        entries.append(entry)
    return {
        "layers": {"1": sorted(x.v1), "2": sorted(x.v2)},
        "crossimplices": entries,
    }


def write_bicomplex(x: Bicomplex, path: str | Path) -> None:
    atomic_write_text(path, json.dumps(bicomplex_to_dict(x), indent=2) + "\n")


# --- multiplex edge lists -----------------------------------------------------

def parse_multiplex(
    path: str | Path, labels: Mapping[int, str] | None = None
) -> Multiplex:
    """Read a multiplex from an edge-list file.

    Duplicate edges are deduplicated; a repeated edge with a different
    weight keeps the last weight seen.  Self-loops are rejected with the
    offending line number.
    """
    layer_edges: dict[int, set[tuple[int, int]]] = {}
    layer_weights: dict[int, dict[tuple[int, int], float]] = {}
    max_node = 0
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) not in (3, 4):
                raise ParseError(
                    f"expected 'layer u v [weight]', got {line!r}", line=lineno
                )
            try:
                layer, u, v = (int(fields[0]), int(fields[1]), int(fields[2]))
                weight = float(fields[3]) if len(fields) == 4 else 1.0
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from exc
            if u == v:
                raise SelfLoop(f"self-loop on node {u}", line=lineno)
            if u < 1 or v < 1:
                raise ParseError(f"node ids are 1-based, got {u}, {v}", line=lineno)
            if not weight > 0:
                raise ParseError(f"non-positive weight {weight}", line=lineno)
            edge = (min(u, v), max(u, v))
            layer_edges.setdefault(layer, set()).add(edge)
            layer_weights.setdefault(layer, {})[edge] = weight
            max_node = max(max_node, v, u)
    return Multiplex(
        n_nodes=max_node,
        layers={s: frozenset(e) for s, e in layer_edges.items()},
        labels=dict(labels or {}),
        edge_weights=layer_weights,
    )


def parse_labels(path: str | Path) -> dict[int, str]:
    """Read a node label file: 'node_id label' per line, '#' comments."""
    labels: dict[int, str] = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split(maxsplit=1)
            if len(fields) != 2:
                raise ParseError(f"expected 'node_id label', got {line!r}", line=lineno)
            try:
                labels[int(fields[0])] = fields[1].strip()
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from exc
    return labels


# --- report serialization ------------------------------------------------------

def betti_csv(rows: Mapping[tuple[int, int], BettiVector]) -> str:
    lines = ["grade,b1,b2"]
    for grade in sorted(rows, key=lambda g: (g[0] + g[1], g)):
        bv = rows[grade]
        lines.append(f"({grade[0]},{grade[1]}),{bv.top},{bv.bottom}")
    return "\n".join(lines) + "\n"


def betti_table_csv(
    table: Mapping[tuple[int, int], Mapping[tuple[int, int], BettiVector]]
) -> str:
    """Rows are grades, columns are layer pairs, cells are '(b1,b2)'."""
    pairs = sorted(table)
    grades = sorted(
        {g for per_pair in table.values() for g in per_pair},
        key=lambda g: (g[0] + g[1], g),
    )
    header = ["grade"] + [f"({s},{t})" for s, t in pairs]
    lines = [",".join(header)]
    for g in grades:
        cells = [f"({g[0]},{g[1]})"]
        for pair in pairs:
            bv = table[pair][g]
            cells.append(f'"({bv.top},{bv.bottom})"')
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def laplacian_csv(basis_labels: list[str], matrix) -> str:
    lines = ["," + ",".join(basis_labels)]
    dense = matrix.toarray()
    for label, row in zip(basis_labels, dense):
        lines.append(label + "," + ",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def report_to_dict(
    report: SpectralReport, labels: Mapping[int, str] | None = None
) -> dict:
    data: dict = {
        "grade": list(report.grade),
        "part": report.part,
        "full_spectrum": report.full_spectrum,
        "eigenvalues": list(report.eigenvalues),
        "stages": [
            {
                "lambda": stage.value,
                "multiplicity": stage.multiplicity,
                "hubs": {str(node): stage.hubs[node] for node in sorted(stage.hubs)},
            }
            for stage in report.stages
        ],
        "bars": (
            {
                str(node): list(report.bars.stages_present[node])
                for node in sorted(report.bars.stages_present)
            }
            if report.bars is not None
            else None
        ),
        "ranking": list(report.ranking),
    }
    if labels:
        data["labels"] = {
            str(node): labels[node]
            for node in sorted(labels)
            if node in set(report.ranking)
        }
    return data


def report_json(report: SpectralReport, labels: Mapping[int, str] | None = None) -> str:
    return json.dumps(report_to_dict(report, labels), indent=2) + "\n"


def hubs_csv(rows: list[RankedHub]) -> str:
    lines = ["rank,node,label,stages,last_stage,hubness"]
    for row in rows:
        lines.append(
            f"{row.rank},{row.node},{row.label},{row.stage_count},"
            f"{row.last_stage},{fmt(row.hubness)}"
        )
    return "\n".join(lines) + "\n"


def stage_hubs_csv(
    stages: list[tuple[int, float, Mapping[int, float]]],
    labels: Mapping[int, str] | None = None,
) -> str:
    """Per-stage hub listing: (stage, lambda, rank, node, label, hubness)."""
    labels = labels or {}
    lines = ["stage,lambda,rank,node,label,hubness"]
    for stage_idx, value, hubs in stages:
        ordered = sorted(hubs.items(), key=lambda kv: (-kv[1], kv[0]))
        for rank, (node, hubness) in enumerate(ordered, start=1):
            label = labels.get(node, str(node))
            lines.append(
                f"{stage_idx},{fmt(value)},{rank},{node},{label},{fmt(hubness)}"
            )
    return "\n".join(lines) + "\n"
