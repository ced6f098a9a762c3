"""Typed client for the analysis service.

The CLI talks to the service exclusively through this client. By default it
mounts the application in-process (no network, no running server needed);
pointing it at a base URL drives a remote instance through the identical
HTTP surface.
"""

from __future__ import annotations

import httpx
from pydantic import BaseModel

from .service.schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    CorrelateRequest,
    CorrelateResponse,
    EnvelopeRequest,
    EnvelopeResponse,
    ShuffleTestRequest,
    ShuffleTestResponse,
)


class ServiceError(RuntimeError):
    """Non-success response from the service."""

    def __init__(self, status_code: int, detail: str):
        super().__init__(f"service returned {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ServiceClient:
    def __init__(self, http: httpx.Client):
        self._http = http

    @classmethod
    def in_process(cls) -> "ServiceClient":
        import warnings

        with warnings.catch_warnings():
            # starlette >= 1.3 prefers httpx2 for its test client; plain
            # httpx works and is what this environment provides
            warnings.simplefilter("ignore")
            from starlette.testclient import TestClient

        from .service.app import app

        return cls(TestClient(app))

    @classmethod
    def remote(cls, base_url: str, timeout: float = 300.0) -> "ServiceClient":
        return cls(httpx.Client(base_url=base_url, timeout=timeout))

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "ServiceClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _post(self, path: str, request: BaseModel, response_model):
        reply = self._http.post(path, json=request.model_dump(mode="json"))
        if reply.status_code != 200:
            try:
                detail = str(reply.json().get("detail"))
            except Exception:
                detail = reply.text
            raise ServiceError(reply.status_code, detail)
        return response_model.model_validate(reply.json())

    def analyze(self, request: AnalyzeRequest) -> AnalyzeResponse:
        return self._post("/analyze", request, AnalyzeResponse)

    def envelope(self, request: EnvelopeRequest) -> EnvelopeResponse:
        return self._post("/envelope", request, EnvelopeResponse)

    def shuffle_test(self, request: ShuffleTestRequest) -> ShuffleTestResponse:
        return self._post("/shuffle-test", request, ShuffleTestResponse)

    def correlate(self, request: CorrelateRequest) -> CorrelateResponse:
        return self._post("/correlate", request, CorrelateResponse)
