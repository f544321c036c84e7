"""HTTP facade for the describer/listener game.

Sessions live in memory behind per-session locks; the engine is consulted on
each utterance but the scene only changes on a confirmed selection, mirroring
the original game where a matching pick makes the object disappear.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .errors import BishopError
from .lexicon import Lexicon, default_lexicon
from .resolution import Resolution, resolve
from .scene import SceneState, cone_polygon, generate_scene, remove_object

SESSION_IDLE_SECONDS = 30 * 60


class CreateSessionRequest(BaseModel):
    seed: int | None = None
    n_objects: int | None = None


class UtteranceRequest(BaseModel):
    text: str


class ConfirmRequest(BaseModel):
    correct: bool
    target: int | None = None


@dataclass
class Session:
    id: str
    state: SceneState
    rng: np.random.Generator
    correct: int = 0
    attempts: int = 0
    pending: tuple[str, int | None] | None = None
    transcript: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)

    def touch(self):
        self.last_used = time.monotonic()

    def scene_view(self) -> dict:
        scene = self.state.current
        objects = []
        for obj in sorted(scene.objects, key=lambda o: (o.y, o.id)):
            polygon = cone_polygon(obj, scene.width, scene.height)
            objects.append({
                "id": obj.id,
                "colour": obj.colour,
                "polygon": [[round(float(x), 2), round(float(y), 2)]
                            for x, y in polygon],
            })
        return {
            "board": {"width": scene.width, "height": scene.height},
            "objects": objects,
            "remaining": len(objects),
        }

    def score_view(self) -> dict:
        return {"correct": self.correct, "attempts": self.attempts}


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, state: SceneState, seed: int) -> Session:
        session = Session(id=uuid.uuid4().hex,
                          state=state,
                          rng=np.random.default_rng(seed))
        with self._lock:
            self._expire()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._expire()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404,
                                detail={"code": "unknown_session",
                                        "message": f"no session {session_id}"})
        session.touch()
        return session

    def _expire(self):
        cutoff = time.monotonic() - SESSION_IDLE_SECONDS
        stale = [sid for sid, s in self._sessions.items()
                 if s.last_used < cutoff]
        for sid in stale:
            del self._sessions[sid]


def create_app(lexicon: Lexicon | None = None) -> FastAPI:
    app = FastAPI(title="bishop game service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    lex = lexicon if lexicon is not None else default_lexicon()
    store = SessionStore()
    app.state.sessions = store

    def error(status: int, code: str, message: str) -> HTTPException:
        return HTTPException(status_code=status,
                             detail={"code": code, "message": message})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        seed = req.seed if req.seed is not None else int(time.time_ns() % 2**31)
        n = req.n_objects if req.n_objects is not None else 30
        try:
            state = generate_scene(seed, n)
        except ValueError as exc:
            raise error(422, "bad_parameters", str(exc))
        except BishopError as exc:
            raise error(500, "generation_failed", str(exc))
        session = store.create(state, seed)
        return {"id": session.id, "seed": seed, "scene": session.scene_view(),
                "score": session.score_view()}

    @app.get("/sessions/{session_id}/scene")
    def get_scene(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return {"scene": session.scene_view(),
                    "score": session.score_view(),
                    "pending": session.pending is not None}

    @app.post("/sessions/{session_id}/utterance")
    def submit_utterance(session_id: str, req: UtteranceRequest):
        session = store.get(session_id)
        with session.lock:
            if not session.state.current.objects:
                raise error(409, "session_complete",
                            "all objects have been removed")
            resolution: Resolution = resolve(req.text, session.state, lex,
                                             rng=session.rng)
            # a re-submit before confirmation replaces the pending entry
            session.pending = (req.text, resolution.chosen)
            return {
                "chosen": resolution.chosen,
                "consistency": resolution.consistency.value,
                "used_random_tiebreak": resolution.used_random_tiebreak,
                "candidates": resolution.to_payload()["candidates"],
            }

    @app.post("/sessions/{session_id}/confirm")
    def confirm(session_id: str, req: ConfirmRequest):
        session = store.get(session_id)
        with session.lock:
            if session.pending is None:
                raise error(409, "no_pending_selection",
                            "submit an utterance first")
            if (req.target is not None
                    and req.target not in session.state.current.ids()):
                raise error(409, "unknown_target",
                            f"object {req.target} is not in the scene")
            utterance, chosen = session.pending
            session.pending = None
            session.attempts += 1
            outcome = "correct" if req.correct else "rejected"
            session.transcript.append({
                "utterance": utterance, "chosen": chosen,
                "target": req.target, "outcome": outcome,
            })
            if req.correct and chosen is not None:
                session.state = remove_object(session.state, chosen)
                session.correct += 1
            return {"scene": session.scene_view(),
                    "score": session.score_view(),
                    "outcome": outcome}

    @app.get("/sessions/{session_id}/transcript")
    def transcript(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return {"transcript": list(session.transcript)}

    return app


app = create_app()
