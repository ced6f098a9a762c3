"""FastAPI service exposing the analysis operations over JSON.

The CLI drives these endpoints through an in-process transport by default,
so the service is exercised on every command; running it standalone
(``permplane serve`` or uvicorn) serves the same API to remote clients.
Domain errors surface as HTTP 400 with the underlying message; per-series
problems (e.g. too short for a dimension) never fail a request, they come
back in the ``skipped`` list.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import partial
from math import factorial

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..bounds import envelope
from ..infomeasures import PlaneQuantifiers, plane_point
from ..ingest import Panel, TimeSeries, attach_attributes
from ..ordinal import EmbeddingParams, ordinal_distribution
from ..ranking import efficiency_distance, group_summary, rank_series
from ..stats import correlation_battery
from ..surrogate import surrogate_test
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    CorrelateRequest,
    CorrelateResponse,
    CorrelationCellOut,
    EnvelopeRequest,
    EnvelopeResponse,
    EnvelopeSampleOut,
    HealthResponse,
    PointOut,
    ShuffleRowOut,
    ShuffleTestRequest,
    ShuffleTestResponse,
    SkipOut,
    SummaryOut,
)


def _to_timeseries(s) -> TimeSeries:
    return TimeSeries(
        name=s.name,
        values=np.array(s.values, dtype=float),
        labels=tuple(s.labels) if s.labels is not None else None,
    )


def _point_out(name: str, q: PlaneQuantifiers, metric: str = "euclidean") -> PointOut:
    return PointOut(
        name=name,
        dim=q.params.dimension,
        tau=q.params.delay,
        h=q.h,
        c=q.c,
        distance=efficiency_distance(q, metric),
        n_effective=q.n_effective,
        length_warning=q.length_warning,
    )


def _quantify_one(ts: TimeSeries, params: EmbeddingParams):
    try:
        return plane_point(ordinal_distribution(ts, params))
    except ValueError as exc:
        return exc


def _quantify_panel(
    series: list[TimeSeries], dims: list[int], tau: int
) -> tuple[dict[int, dict[str, PlaneQuantifiers]], list[SkipOut]]:
    """Plane quantifiers per (dimension, series); short series are skipped.

    Series are processed in parallel; gathering by input order keeps the
    output deterministic regardless of scheduling.
    """
    out: dict[int, dict[str, PlaneQuantifiers]] = {}
    skipped: list[SkipOut] = []
    workers = min(8, max(1, len(series)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for dim in dims:
            params = EmbeddingParams(dimension=dim, delay=tau)
            per_dim: dict[str, PlaneQuantifiers] = {}
            results = list(pool.map(partial(_quantify_one, params=params), series))
            for ts, result in zip(series, results):
                if isinstance(result, ValueError):
                    skipped.append(SkipOut(name=ts.name, dim=dim, reason=str(result)))
                else:
                    per_dim[ts.name] = result
            out[dim] = per_dim
    return out, skipped


def create_app() -> FastAPI:
    app = FastAPI(
        title="permplane",
        version=__version__,
        description="Permutation entropy and statistical complexity analytics",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/analyze", response_model=AnalyzeResponse)
    def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
        series = [_to_timeseries(s) for s in req.series]
        quantifiers, skipped = _quantify_panel(series, req.dims, req.tau)
        points: list[PointOut] = []
        ranking: list[PointOut] = []
        summaries: list[SummaryOut] = []
        for dim in req.dims:
            per_dim = quantifiers[dim]
            points.extend(
                _point_out(ts.name, per_dim[ts.name], req.metric)
                for ts in series
                if ts.name in per_dim
            )
            if not per_dim:
                continue
            ranked = rank_series(per_dim, metric=req.metric)
            ranking.extend(
                PointOut(
                    name=e.name,
                    dim=dim,
                    tau=req.tau,
                    h=e.h,
                    c=e.c,
                    distance=e.distance,
                    n_effective=per_dim[e.name].n_effective,
                    length_warning=per_dim[e.name].length_warning,
                )
                for e in ranked.entries
            )
            if req.groups:
                labeled = {n: q for n, q in per_dim.items() if n in req.groups}
                if labeled:
                    labels = {n: req.groups[n] for n in labeled}
                    summaries.extend(
                        SummaryOut(
                            group=s.group,
                            dim=dim,
                            mean_h=s.mean_h,
                            std_h=s.std_h,
                            mean_c=s.mean_c,
                            std_c=s.std_c,
                            n=s.n,
                        )
                        for s in group_summary(labeled, labels)
                    )
        return AnalyzeResponse(
            version=__version__,
            tau=req.tau,
            points=points,
            ranking=ranking,
            summaries=summaries,
            skipped=skipped,
        )

    @app.post("/envelope", response_model=EnvelopeResponse)
    def envelope_endpoint(req: EnvelopeRequest) -> EnvelopeResponse:
        m = req.m if req.m is not None else factorial(req.dim)
        try:
            env = envelope(m, req.resolution)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        samples = [
            EnvelopeSampleOut(h=h, c_min=lo, c_max=hi) for h, lo, hi in env.samples
        ]
        return EnvelopeResponse(
            version=__version__, m=m, resolution=req.resolution, samples=samples
        )

    @app.post("/shuffle-test", response_model=ShuffleTestResponse)
    def shuffle_test(req: ShuffleTestRequest) -> ShuffleTestResponse:
        series = [_to_timeseries(s) for s in req.series]
        rows: list[ShuffleRowOut] = []
        skipped: list[SkipOut] = []
        for dim in req.dims:
            params = EmbeddingParams(dimension=dim, delay=req.tau)
            for ts in series:
                try:
                    report = surrogate_test(ts, params, req.n_shuffles, req.seed)
                except ValueError as exc:
                    skipped.append(SkipOut(name=ts.name, dim=dim, reason=str(exc)))
                    continue
                rows.append(
                    ShuffleRowOut(
                        name=ts.name,
                        dim=dim,
                        tau=req.tau,
                        role="original",
                        shuffle_index=None,
                        h=report.original.h,
                        c=report.original.c,
                        n_effective=report.original.n_effective,
                        length_warning=report.original.length_warning,
                    )
                )
                rows.extend(
                    ShuffleRowOut(
                        name=ts.name,
                        dim=dim,
                        tau=req.tau,
                        role="surrogate",
                        shuffle_index=i,
                        h=q.h,
                        c=q.c,
                        n_effective=q.n_effective,
                        length_warning=q.length_warning,
                    )
                    for i, q in enumerate(report.surrogates)
                )
        return ShuffleTestResponse(
            version=__version__,
            tau=req.tau,
            seed=req.seed,
            n_shuffles=req.n_shuffles,
            rows=rows,
            skipped=skipped,
        )

    @app.post("/correlate", response_model=CorrelateResponse)
    def correlate(req: CorrelateRequest) -> CorrelateResponse:
        series = [_to_timeseries(s) for s in req.series]
        columns = req.attribute_columns
        if columns is None:
            columns = sorted({col for attrs in req.attributes.values() for col in attrs})
        panel = attach_attributes(Panel(series=tuple(series)), columns, req.attributes)
        quantifiers, skipped = _quantify_panel(series, req.dims, req.tau)
        groups_by_label: dict[str, list[str]] = {}
        if req.groups:
            for name, label in req.groups.items():
                groups_by_label.setdefault(label, []).append(name)
        try:
            cells = correlation_battery(panel, quantifiers, groups_by_label, req.method)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return CorrelateResponse(
            version=__version__,
            tau=req.tau,
            method=req.method,
            cells=[
                CorrelationCellOut(
                    group=c.group,
                    dim=c.dimension,
                    attribute=c.attribute,
                    rho=c.rho,
                    p_value=c.p_value,
                    n=c.n,
                    stars=c.stars,
                    insufficient=c.insufficient,
                )
                for c in cells
            ],
            orphaned_attributes=list(panel.orphaned_attributes),
            skipped=skipped,
        )

    return app


app = create_app()
