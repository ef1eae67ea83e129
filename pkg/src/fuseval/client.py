"""Thin client for the fuseval service.

Without a server URL the service app runs in-process behind an ASGI
transport, so the CLI needs no running server; pass ``server`` to target a
live instance over HTTP. Either way the CLI goes through the same endpoint
code path.
"""

from __future__ import annotations

import asyncio
import json

import httpx

from .errors import ServiceError


class ServiceClient:
    def __init__(self, server: str | None = None, timeout: float = 60.0):
        self._server = server.rstrip("/") if server else None
        self._timeout = timeout
        self._app = None

    def evaluate(self, payload: dict) -> dict:
        return self._post("/evaluate", payload)

    def fuse(self, payload: dict) -> dict:
        return self._post("/fuse", payload)

    def compare(self, payload: dict) -> dict:
        return self._post("/compare", payload)

    def simulate(self, payload: dict) -> dict:
        return self._post("/simulate", payload)

    def _post(self, path: str, payload: dict) -> dict:
        if self._server is None:
            response = asyncio.run(self._post_in_process(path, payload))
        else:
            response = httpx.post(self._server + path, json=payload, timeout=self._timeout)
        if response.status_code != 200:
            raise self._to_error(response)
        return response.json()

    async def _post_in_process(self, path: str, payload: dict) -> httpx.Response:
        if self._app is None:
            from .service.app import create_app

            self._app = create_app()
        transport = httpx.ASGITransport(app=self._app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://fuseval.internal", timeout=self._timeout
        ) as client:
            return await client.post(path, json=payload)

    @staticmethod
    def _to_error(response: httpx.Response) -> ServiceError:
        try:
            body = response.json()
        except ValueError:
            return ServiceError("service", f"HTTP {response.status_code}: {response.text[:200]}")
        if isinstance(body, dict) and "error" in body:
            return ServiceError(str(body["error"]), str(body.get("detail", "")))
        # FastAPI request-validation errors arrive as {"detail": [...]}.
        detail = body.get("detail", body) if isinstance(body, dict) else body
        return ServiceError("request", json.dumps(detail, sort_keys=True))
