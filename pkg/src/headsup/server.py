"""WebSocket transport for the session registry.

One endpoint, ``/ws``: the first frame must be ``create`` or ``join``; after
that the connection is bound to a seat and frames are routed through the
registry. Everything is JSON text frames with a ``type`` field. The frontend
build, when present, is served from ``/``.
"""

from __future__ import annotations

import asyncio
import json
import logging
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import InvalidConfig
from .service import (
    HEARTBEAT_SECONDS,
    Delivery,
    ServiceError,
    SessionRegistry,
)

log = logging.getLogger("headsup.server")


class ConnectionHub:
    """Maps (session code, seat) to live sockets and pushes frames to them."""

    def __init__(self) -> None:
        self._sockets: dict[tuple[str, int], WebSocket] = {}

    def bind(self, code: str, seat: int, socket: WebSocket) -> None:
        self._sockets[(code, seat)] = socket

    def unbind(self, code: str, seat: int, socket: WebSocket) -> None:
        if self._sockets.get((code, seat)) is socket:
            del self._sockets[(code, seat)]

    async def push(self, code: str, seat: int, frame: dict) -> None:
        socket = self._sockets.get((code, seat))
        if socket is None:
            return
        try:
            await socket.send_text(json.dumps(frame))
        except Exception:  # connection already torn down
            self._sockets.pop((code, seat), None)

    async def deliver(self, code: str, delivery: Delivery) -> None:
        for seat in (0, 1):
            for frame in delivery.broadcast[seat]:
                await self.push(code, seat, frame)

    async def close_all(self) -> None:
        for (code, seat), socket in list(self._sockets.items()):
            try:
                await socket.send_text(
                    json.dumps({"type": "reject", "reason": "session_ended",
                                "seq": -1, "detail": "server shutting down"})
                )
                await socket.close()
            except Exception:
                pass
        self._sockets.clear()


def create_app(
    registry: SessionRegistry | None = None,
    frontend_dir: str | Path | None = None,
    heartbeat_sweep: bool = True,
) -> FastAPI:
    registry = registry or SessionRegistry()
    hub = ConnectionHub()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        sweeper = None
        if heartbeat_sweep:
            async def sweep_loop():
                while True:
                    await asyncio.sleep(HEARTBEAT_SECONDS)
                    for code, delivery in registry.sweep_heartbeats().items():
                        await hub.deliver(code, delivery)

            sweeper = asyncio.create_task(sweep_loop())
        try:
            yield
        finally:
            if sweeper is not None:
                sweeper.cancel()
            await hub.close_all()

    app = FastAPI(title="headsup", lifespan=lifespan)
    app.state.registry = registry
    app.state.hub = hub

    @app.get("/healthz")
    async def healthz():
        return JSONResponse({"ok": True, "sessions": len(registry.sessions)})

    @app.websocket("/ws")
    async def ws_endpoint(socket: WebSocket):
        await socket.accept()
        code: str | None = None
        seat: int | None = None
        try:
            hello = json.loads(await socket.receive_text())
            if hello.get("type") == "create":
                code, created = registry.create_session(
                    hello.get("config", {}), str(hello.get("name", "player"))
                )
                seat = 0
                hub.bind(code, seat, socket)
                await socket.send_text(json.dumps(created))
            elif hello.get("type") == "join":
                join_code = str(hello.get("code", "")).upper()
                seat, delivery = registry.join_session(
                    join_code, str(hello.get("name", "player"))
                )
                code = join_code
                hub.bind(code, seat, socket)
                for frame in delivery.to_sender:
                    await socket.send_text(json.dumps(frame))
                await hub.deliver(code, delivery)
            else:
                await socket.send_text(json.dumps({
                    "type": "reject", "reason": "bad_request", "seq": 0,
                    "detail": "first frame must be create or join",
                }))
                await socket.close()
                return

            while True:
                try:
                    frame = json.loads(await socket.receive_text())
                except json.JSONDecodeError:
                    await socket.send_text(json.dumps({
                        "type": "reject", "reason": "bad_request",
                        "seq": -1, "detail": "frames must be JSON objects",
                    }))
                    continue
                delivery = registry.route_request(code, seat, frame)
                for out in delivery.to_sender:
                    await socket.send_text(json.dumps(out))
                await hub.deliver(code, delivery)
        except WebSocketDisconnect:
            pass
        except ServiceError as exc:
            try:
                await socket.send_text(json.dumps({
                    "type": "reject", "reason": exc.reason, "seq": -1,
                    "detail": str(exc),
                }))
                await socket.close()
            except Exception:
                pass
        except InvalidConfig as exc:
            try:
                await socket.send_text(json.dumps({
                    "type": "reject", "reason": "invalid_config", "seq": -1,
                    "detail": str(exc),
                }))
                await socket.close()
            except Exception:
                pass
        finally:
            if code is not None and seat is not None:
                hub.unbind(code, seat, socket)
                delivery = registry.mark_disconnected(code, seat)
                await hub.deliver(code, delivery)

    if frontend_dir is None:
        frontend_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    frontend_dir = Path(frontend_dir)
    if frontend_dir.is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")
    else:
        @app.get("/")
        async def index():
            return JSONResponse(
                {"name": "headsup", "hint": "connect a client to /ws"}
            )

    return app
