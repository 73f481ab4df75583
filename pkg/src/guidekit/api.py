"""REST + websocket surface of the engine.

Endpoints (JSON bodies throughout):

    POST /api/state/properties          set key-value pairs on the state
    POST /api/state/callbacks/{name}    invoke a state update callback
    POST /api/suggestions/accept        interact with a suggestion;
         /api/suggestions/reject        the body is the suggestion message,
         /api/suggestions/preview-start only suggestion_id is required
         /api/suggestions/preview-end
    GET  /api/suggestions               current pending suggestions
    GET  /api/health                    liveness, revision, active strategies
    WS   /ws                            hello + suggestion/retraction stream

Unknown fields in request bodies are ignored, never fatal.
"""

from __future__ import annotations

from contextlib import asynccontextmanager
from typing import Any, Optional

from fastapi import Body, FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel

from .engine.core import InvalidTransition, UnknownSuggestion
from .script.errors import ScriptError, ScriptRuntimeError
from .service import EngineService
from .state import ArgumentMismatch, UnknownCallback
from .values import ValueError_, canon_json, ensure_value


class RevisionResponse(BaseModel):
    revision: int


class InteractionResponse(BaseModel):
    status: str


class HealthResponse(BaseModel):
    status: str
    revision: int
    active_strategies: list[str]


class SuggestionModel(BaseModel):
    suggestion_id: str
    strategy: str
    action_id: str
    degree: str
    content: Any
    title: str
    description: str
    created_revision: float
    created_at: float
    status: str


def _object_body(body: Any, *, allow_empty: bool = False) -> dict:
    if not isinstance(body, dict):
        raise HTTPException(status_code=400, detail="request body must be a JSON object")
    if not body and not allow_empty:
        raise HTTPException(status_code=400, detail="request body must not be empty")
    try:
        return ensure_value(body, "body")
    except ValueError_ as err:
        raise HTTPException(status_code=400, detail=str(err)) from None


def create_app(service: EngineService) -> FastAPI:
    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        await service.start()
        try:
            yield
        finally:
            await service.stop()

    app = FastAPI(title="guidekit", lifespan=lifespan)

    @app.post("/api/state/properties", response_model=RevisionResponse)
    async def set_properties(body: Any = Body(...)):
        patch = _object_body(body)
        event = await service.submit(lambda: service.engine.apply_properties(patch))
        return RevisionResponse(revision=event.revision)

    @app.post("/api/state/callbacks/{name}", response_model=RevisionResponse)
    async def invoke_callback(name: str, body: Any = Body(default={})):
        args = _object_body(body, allow_empty=True)
        try:
            event = await service.submit(
                lambda: service.engine.apply_callback(name, args)
            )
        except UnknownCallback as err:
            raise HTTPException(status_code=404, detail=str(err)) from None
        except ArgumentMismatch as err:
            raise HTTPException(status_code=400, detail=str(err)) from None
        except ScriptRuntimeError as err:
            raise HTTPException(status_code=422, detail=str(err)) from None
        except ScriptError as err:
            raise HTTPException(status_code=422, detail=str(err)) from None
        return RevisionResponse(revision=event.revision)

    async def _interact(kind: str, body: Any) -> InteractionResponse:
        payload = _object_body(body)
        suggestion_id = payload.get("suggestion_id")
        if not isinstance(suggestion_id, str):
            raise HTTPException(
                status_code=400, detail="body must carry a string suggestion_id"
            )
        try:
            suggestion = await service.submit(
                lambda: service.engine.apply_interaction(suggestion_id, kind)
            )
        except UnknownSuggestion as err:
            raise HTTPException(status_code=404, detail=str(err)) from None
        except InvalidTransition as err:
            raise HTTPException(status_code=409, detail=str(err)) from None
        return InteractionResponse(status=suggestion.status)

    @app.post("/api/suggestions/accept", response_model=InteractionResponse)
    async def accept(body: Any = Body(...)):
        return await _interact("accept", body)

    @app.post("/api/suggestions/reject", response_model=InteractionResponse)
    async def reject(body: Any = Body(...)):
        return await _interact("reject", body)

    @app.post("/api/suggestions/preview-start", response_model=InteractionResponse)
    async def preview_start(body: Any = Body(...)):
        return await _interact("preview_start", body)

    @app.post("/api/suggestions/preview-end", response_model=InteractionResponse)
    async def preview_end(body: Any = Body(...)):
        return await _interact("preview_end", body)

    @app.get("/api/suggestions", response_model=list[SuggestionModel])
    async def pending_suggestions():
        return await service.submit(service.engine.pending_payloads)

    @app.get("/api/health", response_model=HealthResponse)
    async def health():
        info = await service.submit(service.engine.health)
        return HealthResponse(
            status=info["status"],
            revision=int(info["revision"]),
            active_strategies=info["active_strategies"],
        )

    @app.websocket("/ws")
    async def socket(websocket: WebSocket):
        await websocket.accept()
        queue, hello = service.subscribe_socket()
        try:
            await websocket.send_text(canon_json(hello))
            while True:
                message = await queue.get()
                await websocket.send_text(canon_json(message))
        except WebSocketDisconnect:
            pass
        finally:
            service.unsubscribe(queue)

    return app
