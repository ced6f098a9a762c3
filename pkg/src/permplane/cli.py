"""Command-line front end: a thin client over the analysis service.

Subcommands: analyze, envelope, shuffle-test, correlate, serve. File
parsing and output writing happen here; all computation goes through the
service client (in-process unless --server points elsewhere).

Exit codes: 0 full success, 1 partial success (some series skipped),
2 fatal error.

Every output file starts with a comment line recording the tool version,
D (or M for envelopes), tau, and seed; JSON outputs carry the same fields
in a "meta" object. Outputs are deterministic: identical inputs and flags
produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from math import factorial
from pathlib import Path

from . import __version__
from .client import ServiceClient, ServiceError
from .ingest import (
    Panel,
    PanelFormatError,
    clean_panel,
    load_attributes,
    load_groups,
    load_panel,
)
from .service.schemas import (
    AnalyzeRequest,
    CorrelateRequest,
    EnvelopeRequest,
    SeriesIn,
    ShuffleTestRequest,
)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_FATAL = 2


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse dimensions from {text!r}")
    if not dims:
        raise argparse.ArgumentTypeError("at least one dimension is required")
    return dims


def _add_common(p: argparse.ArgumentParser, *, needs_input: bool) -> None:
    if needs_input:
        p.add_argument("--input", required=True, help="panel CSV file")
        p.add_argument("--layout", choices=("wide", "long"), default="wide")
        p.add_argument("--delimiter", default=",", help="CSV delimiter (default ,)")
    p.add_argument("--dims", type=_parse_dims, default=[3, 4, 5], help="embedding dimensions, e.g. 3,4,5")
    p.add_argument("--tau", type=int, default=1, help="embedding delay")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--server", default=None, help="base URL of a running service (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permplane",
        description="Permutation entropy and statistical complexity analytics for time-series panels",
    )
    parser.add_argument("--version", action="version", version=f"permplane {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="plane points, efficiency ranking, group summaries")
    _add_common(p, needs_input=True)
    p.add_argument("--groups", default=None, help="name,label CSV of group memberships")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("envelope", help="min/max complexity curves for plotting")
    _add_common(p, needs_input=False)
    p.add_argument("--m", type=int, default=None, help="number of states (overrides --dims)")
    p.add_argument("--resolution", type=int, default=512, help="entropy samples per curve")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("shuffle-test", help="original vs shuffled surrogate plane points")
    _add_common(p, needs_input=True)
    p.add_argument("--shuffles", type=int, default=1, help="shuffles per series")
    p.add_argument("--seed", type=int, required=True, help="master RNG seed")
    p.set_defaults(func=cmd_shuffle_test)

    p = sub.add_parser("correlate", help="entropy vs attribute rank-correlation battery")
    _add_common(p, needs_input=True)
    p.add_argument("--attributes", required=True, help="name,attr1,attr2,... CSV of per-series attributes")
    p.add_argument("--groups", default=None, help="name,label CSV of group memberships")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def _client(args) -> ServiceClient:
    if args.server:
        return ServiceClient.remote(args.server)
    return ServiceClient.in_process()


def _load_clean_panel(args) -> Panel:
    panel = load_panel(args.input, layout=args.layout, delimiter=args.delimiter)
    dropped = {s.name: s.n_missing for s in panel.series if s.n_missing}
    if dropped:
        notes = ", ".join(f"{name} ({n})" for name, n in dropped.items())
        print(f"note: dropped missing values from: {notes}", file=sys.stderr)
    return clean_panel(panel, policy="drop")


def _series_payload(panel: Panel) -> list[SeriesIn]:
    return [
        SeriesIn(
            name=s.name,
            values=s.values.tolist(),
            labels=list(s.labels) if s.labels is not None else None,
        )
        for s in panel.series
    ]


def _meta(dim=None, m=None, tau=None, seed=None) -> dict:
    meta = {"permplane": __version__, "D": dim if dim is not None else "-"}
    if m is not None:
        meta["M"] = m
    meta["tau"] = tau if tau is not None else "-"
    meta["seed"] = seed if seed is not None else "-"
    return meta


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_table(path: Path, meta: dict, columns: list[str], rows: list[dict],
                 fmt: str, comments: list[str] | None = None) -> None:
    if fmt == "json":
        payload = {"meta": meta, "rows": rows}
        if comments:
            payload["skipped"] = comments
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[col]) for col in columns])
        for comment in comments or ():
            fh.write(f"# skipped: {comment}\n")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_analyze(args) -> int:
    panel = _load_clean_panel(args)
    groups = None
    if args.groups:
        groups = load_groups(args.groups, delimiter=args.delimiter)
        unknown = sorted(set(groups) - set(panel.names))
        if unknown:
            raise ValueError(f"groups file references unknown series: {unknown}")
    request = AnalyzeRequest(
        series=_series_payload(panel), dims=args.dims, tau=args.tau, groups=groups
    )
    with _client(args) as client:
        response = client.analyze(request)

    out = _out_dir(args)
    ext = args.format
    point_cols = ["name", "h", "c", "distance", "n_effective", "length_warning"]
    for dim in args.dims:
        rows = [
            {col: getattr(p, col) for col in point_cols}
            for p in response.points
            if p.dim == dim
        ]
        comments = [f"{s.name}: {s.reason}" for s in response.skipped if s.dim == dim]
        _write_table(out / f"points_D{dim}.{ext}", _meta(dim=dim, tau=args.tau),
                     point_cols, rows, ext, comments)

        rank_cols = ["name", "h", "c", "distance"]
        rank_rows = [
            {col: getattr(p, col) for col in rank_cols}
            for p in response.ranking
            if p.dim == dim
        ]
        _write_table(out / f"ranking_D{dim}.{ext}", _meta(dim=dim, tau=args.tau),
                     rank_cols, rank_rows, ext)

        if groups:
            sum_cols = ["group", "mean_h", "std_h", "mean_c", "std_c", "n"]
            sum_rows = [
                {col: getattr(s, col) for col in sum_cols}
                for s in response.summaries
                if s.dim == dim
            ]
            _write_table(out / f"summary_D{dim}.{ext}", _meta(dim=dim, tau=args.tau),
                         sum_cols, sum_rows, ext)

    for skip in response.skipped:
        print(f"warning: skipped {skip.name} at D={skip.dim}: {skip.reason}", file=sys.stderr)
    return EXIT_PARTIAL if response.skipped else EXIT_OK


def cmd_envelope(args) -> int:
    ms = [args.m] if args.m is not None else [factorial(d) for d in args.dims]
    dims = [None] if args.m is not None else args.dims
    out = _out_dir(args)
    ext = args.format
    with _client(args) as client:
        for dim, m in zip(dims, ms):
            response = client.envelope(EnvelopeRequest(m=m, resolution=args.resolution))
            cols = ["h", "c_min", "c_max"]
            rows = [{c: getattr(s, c) for c in cols} for s in response.samples]
            _write_table(out / f"envelope_M{m}.{ext}", _meta(dim=dim, m=m), cols, rows, ext)
    return EXIT_OK


def cmd_shuffle_test(args) -> int:
    if args.shuffles < 1:
        raise ValueError(f"--shuffles must be >= 1, got {args.shuffles}")
    panel = _load_clean_panel(args)
    request = ShuffleTestRequest(
        series=_series_payload(panel),
        dims=args.dims,
        tau=args.tau,
        n_shuffles=args.shuffles,
        seed=args.seed,
    )
    with _client(args) as client:
        response = client.shuffle_test(request)

    out = _out_dir(args)
    ext = args.format
    cols = ["name", "role", "shuffle_index", "h", "c", "n_effective", "length_warning"]
    for dim in args.dims:
        rows = [
            {c: getattr(r, c) for c in cols}
            for r in response.rows
            if r.dim == dim
        ]
        comments = [f"{s.name}: {s.reason}" for s in response.skipped if s.dim == dim]
        _write_table(out / f"shuffle_D{dim}.{ext}",
                     _meta(dim=dim, tau=args.tau, seed=args.seed), cols, rows, ext, comments)

    for skip in response.skipped:
        print(f"warning: skipped {skip.name} at D={skip.dim}: {skip.reason}", file=sys.stderr)
    return EXIT_PARTIAL if response.skipped else EXIT_OK


def cmd_correlate(args) -> int:
    panel = _load_clean_panel(args)
    columns, table = load_attributes(args.attributes, delimiter=args.delimiter)
    groups = None
    if args.groups:
        groups = load_groups(args.groups, delimiter=args.delimiter)
        unknown = sorted(set(groups) - set(panel.names))
        if unknown:
            raise ValueError(f"groups file references unknown series: {unknown}")
    known = set(panel.names)
    orphans = sorted(name for name in table if name not in known)
    if orphans:
        print(f"warning: attribute rows for unknown series: {orphans}", file=sys.stderr)
    request = CorrelateRequest(
        series=_series_payload(panel),
        dims=args.dims,
        tau=args.tau,
        attributes={name: attrs for name, attrs in table.items() if name in known},
        attribute_columns=list(columns),
        groups=groups,
    )
    with _client(args) as client:
        response = client.correlate(request)

    out = _out_dir(args)
    ext = args.format
    cols = ["group", "D", "attribute", "rho", "p_value", "n", "stars"]
    rows = []
    for cell in response.cells:
        row = {
            "group": cell.group,
            "D": cell.dim,
            "attribute": cell.attribute,
            "rho": cell.rho,
            "p_value": cell.p_value,
            "n": cell.n,
            "stars": cell.stars,
        }
        if ext == "json":
            row["insufficient"] = cell.insufficient
        rows.append(row)
    dim_label = ",".join(str(d) for d in args.dims)
    _write_table(out / f"correlations.{ext}", _meta(dim=dim_label, tau=args.tau),
                 cols if ext == "csv" else cols + ["insufficient"], rows, ext)

    for skip in response.skipped:
        print(f"warning: skipped {skip.name} at D={skip.dim}: {skip.reason}", file=sys.stderr)
    return EXIT_PARTIAL if response.skipped else EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PanelFormatError, ValueError, ServiceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
