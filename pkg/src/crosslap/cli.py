"""Command-line front end.

Subcommands: ``betti`` (cross-Betti vectors as CSV), ``laplacian``
(matrix dump), ``spectrum`` (eigenvalues as JSON), ``hubs``
(harmonic/principal/per-stage cross-hubs), ``persist`` (persistence bars
as JSON and SVG), and ``diffuse`` (the full multiplex pipeline over
ordered layer pairs).  All outputs are deterministic for fixed input and
config; every report is fully computed before anything is written, and
writes are atomic, so failed runs leave no partial files.

The environment variable ``CROSSLAP_TOL_ZERO`` overrides the default
nonzero-intensity threshold; ``--tol-zero`` overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import io
from .barcode import render_barcode_svg
from .core import BOTTOM, TOP
from .diffusion import diffusion_hub_analysis
from .errors import CrosslapError
from .homology import DEFAULT_TABLE_GRADES, betti_vector
from .spectral import TOL_ZERO, eig, laplacian, spectral_report


def _parse_grade(text: str) -> tuple[int, int]:
    try:
        k, l = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grade must be 'k,l', got {text!r}")
    return (k, l)


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        s, t = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"pair must be 's,t', got {text!r}")
    return (s, t)


def _default_tol_zero() -> float:
    env = os.environ.get("CROSSLAP_TOL_ZERO")
    if env is None:
        return TOL_ZERO
    try:
        value = float(env)
    except ValueError:
        raise CrosslapError(f"CROSSLAP_TOL_ZERO is not a number: {env!r}")
    if not value > 0:
        raise CrosslapError(f"CROSSLAP_TOL_ZERO must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosslap",
        description="Cross-homology and cross-Laplacian analysis of "
        "two-layer complexes and multiplex networks.",
    )
    parser.add_argument(
        "--out-dir", default=".", help="directory for report files (default: .)"
    )
    parser.add_argument(
        "--tol-zero",
        type=float,
        default=None,
        help="nonzero-intensity threshold (default: env CROSSLAP_TOL_ZERO or 1e-8)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", help="cross-Betti vectors of a bicomplex")
    p.add_argument("input", help="bicomplex JSON file")
    p.add_argument(
        "--grade",
        action="append",
        type=_parse_grade,
        help="grade 'k,l' (repeatable; default: the five standard grades)",
    )

    p = sub.add_parser("laplacian", help="dump a cross-Laplacian matrix as CSV")
    p.add_argument("input")
    p.add_argument("--grade", type=_parse_grade, default=(0, 0))
    p.add_argument("--part", choices=[TOP, BOTTOM], default=TOP)

    p = sub.add_parser("spectrum", help="eigenvalues of a cross-Laplacian")
    p.add_argument("input")
    p.add_argument("--grade", type=_parse_grade, default=(0, 0))
    p.add_argument("--part", choices=[TOP, BOTTOM], default=TOP)

    p = sub.add_parser("hubs", help="spectral cross-hubs of a bicomplex")
    p.add_argument("input")
    p.add_argument("--part", choices=[TOP, BOTTOM], default=TOP)
    p.add_argument(
        "--stage",
        default="all",
        help="'harmonic', 'max', 'all', or a stage index (default: all)",
    )
    p.add_argument(
        "--intensity-rule",
        choices=["max", "l1", "projector"],
        default="max",
        help="aggregation of eigenvector coordinates over a stage",
    )

    p = sub.add_parser("persist", help="spectral persistence bars")
    p.add_argument("input")
    p.add_argument("--part", choices=[TOP, BOTTOM], default=TOP)

    p = sub.add_parser("diffuse", help="multiplex diffusion pipeline")
    p.add_argument("input", help="multiplex edge-list file")
    p.add_argument(
        "--pairs",
        default="all",
        help="'all' or comma pairs like '1,2;2,1' (default: all ordered pairs)",
    )
    p.add_argument("--top", type=int, default=10, help="ranking depth (default: 10)")
    p.add_argument("--labels", help="node label file")
    p.add_argument(
        "--use-weights",
        action="store_true",
        help="record edge weights on the cross-edges (default: binary topology)",
    )
    p.add_argument("--jobs", type=int, default=1, help="parallel layer-pair analyses")
    return parser


def _bicomplex_and_labels(path: str):
    x = io.parse_bicomplex(path)
    data = json.loads(Path(path).read_text())
    return x, io.bicomplex_labels_from_dict(data)


def _hub_labels(labels: dict[str, dict[int, str]], part: str) -> dict[int, str]:
    # part T hubs live in the bottom layer, part B hubs in the top layer
    return labels.get("2" if part == TOP else "1", {})


def _cmd_betti(args) -> dict[str, str]:
    x = io.parse_bicomplex(args.input)
    grades = tuple(args.grade) if args.grade else DEFAULT_TABLE_GRADES
    rows = {g: betti_vector(x, g) for g in grades}
    return {"betti.csv": io.betti_csv(rows)}


def _cmd_laplacian(args) -> dict[str, str]:
    x = io.parse_bicomplex(args.input)
    lap = laplacian(x, args.grade, args.part)
    name = f"laplacian_{args.part}_{args.grade[0]}_{args.grade[1]}.csv"
    return {name: io.laplacian_csv([str(a) for a in lap.basis.simplices], lap.matrix)}


def _cmd_spectrum(args) -> dict[str, str]:
    x = io.parse_bicomplex(args.input)
    decomp = eig(laplacian(x, args.grade, args.part))
    doc = {
        "grade": list(args.grade),
        "part": args.part,
        "full_spectrum": decomp.full_spectrum,
        "eigenvalues": [float(v) for v in decomp.values],
    }
    name = f"spectrum_{args.part}_{args.grade[0]}_{args.grade[1]}.json"
    return {name: json.dumps(doc, indent=2) + "\n"}


def _cmd_hubs(args, tol_zero: float) -> dict[str, str]:
    x, labels = _bicomplex_and_labels(args.input)
    report = spectral_report(
        x, args.part, rule=args.intensity_rule, tol_zero=tol_zero
    )
    hub_labels = _hub_labels(labels, args.part)
    if args.stage == "all":
        chosen = list(enumerate(report.stages))
    elif args.stage == "harmonic":
        scale = max(1.0, report.eigenvalues[-1])
        chosen = (
            [(0, report.stages[0])]
            if report.stages[0].value <= tol_zero * scale
            else []
        )
    elif args.stage == "max":
        chosen = [(len(report.stages) - 1, report.stages[-1])]
    else:
        idx = int(args.stage)
        chosen = [(idx, report.stages[idx])]
    csv_text = io.stage_hubs_csv(
        [(idx, st.value, st.hubs) for idx, st in chosen], hub_labels
    )
    out = {
        f"hubs_{args.part}_{args.stage}.csv": csv_text,
        f"hubs_{args.part}.json": io.report_json(report, hub_labels),
    }
    return out


def _cmd_persist(args, tol_zero: float) -> dict[str, str]:
    x, labels = _bicomplex_and_labels(args.input)
    report = spectral_report(x, args.part, tol_zero=tol_zero)
    if report.bars is None:
        raise CrosslapError(
            "full-spectrum persistence unavailable at this size; "
            "see the spectrum command for extremal stages"
        )
    hub_labels = _hub_labels(labels, args.part)
    return {
        f"persistence_{args.part}.json": io.report_json(report, hub_labels),
        f"persistence_{args.part}.svg": render_barcode_svg(report.bars, hub_labels),
    }


def _cmd_diffuse(args, tol_zero: float) -> dict[str, str]:
    labels = io.parse_labels(args.labels) if args.labels else None
    m = io.parse_multiplex(args.input, labels=labels)
    layer_ids = m.layer_ids()
    if args.pairs == "all":
        pairs = [(s, t) for s in layer_ids for t in layer_ids if s != t]
    else:
        pairs = [_parse_pair(chunk) for chunk in args.pairs.split(";") if chunk]

    def analyse(pair):
        s, t = pair
        result = diffusion_hub_analysis(
            m, s, t, top_n=args.top, use_weights=args.use_weights, tol_zero=tol_zero
        )
        stem = f"diffusion_{s}_to_{t}"
        files = {
            f"{stem}.csv": io.hubs_csv(list(result.top_hubs)),
            f"{stem}.json": io.report_json(result.report, m.labels),
        }
        if result.report.bars is not None and result.report.bars.stages_present:
            files[f"{stem}.svg"] = render_barcode_svg(result.report.bars, m.labels)
        return files

    out: dict[str, str] = {}
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            for files in pool.map(analyse, pairs):
                out.update(files)
    else:
        for pair in pairs:
            out.update(analyse(pair))
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol_zero = args.tol_zero if args.tol_zero is not None else _default_tol_zero()
        if not tol_zero > 0:
            raise CrosslapError(f"tol-zero must be positive, got {tol_zero}")
        if args.command == "betti":
            files = _cmd_betti(args)
        elif args.command == "laplacian":
            files = _cmd_laplacian(args)
        elif args.command == "spectrum":
            files = _cmd_spectrum(args)
        elif args.command == "hubs":
            files = _cmd_hubs(args, tol_zero)
        elif args.command == "persist":
            files = _cmd_persist(args, tol_zero)
        else:
            files = _cmd_diffuse(args, tol_zero)
    except CrosslapError as exc:
        print(f"crosslap: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, IndexError) as exc:
        print(f"crosslap: error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out_dir)
    for name in sorted(files):
        io.atomic_write_text(out_dir / name, files[name])
        print(out_dir / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
