"""HTTP service exposing the authoring engine.

Every route body is the engine's own vocabulary: requests are decoded
into the same value objects the library uses, and domain errors pass
through with their codes intact, so a client can dispatch on
``{"error": "OverlapConflict", ...}`` exactly as library callers do on
exception types.

Concurrency model: stories live in an in-memory workspace; each story
has one write lock, and every mutation is read-apply-swap under that
lock, so story updates are linearizable per story.  Playback sessions
pin the immutable story value that existed when the session started;
edits made while a session plays do not disturb it.

Side channels: ``GET /events?after=N`` long-polls a shared feed that
carries job state changes, story mutation pings, and playback events
from clock-driven sessions.
"""

from __future__ import annotations

import io
import os
import random
import threading
import time
from collections import deque
from contextlib import asynccontextmanager
from dataclasses import replace

from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse

from .. import playback as pb
from ..assets import AssetStore
from ..errors import (
    BadRequest,
    EmptyStoryline,
    ProviderError,
    StoryError,
    Unauthorized,
    UnknownSession,
    UnknownStory,
)
from ..generation import (
    AudioRequest,
    GenerationRequest,
    ImageRequest,
    SegmentationRequest,
    SpeechRequest,
    refine_prompt,
    ExampleLibrary,
)
from ..jobs import GenerationJob, JobQueue
from ..model import (
    InteractionSpec,
    ParticleEffect,
    Scene,
    SceneElement,
    Story,
    TimelineClip,
    Track,
    VoiceProfile,
    new_story,
    next_clip_id,
    next_element_id,
    register_asset,
    with_scene,
)
from ..persistence import PackageStore, export_package, story_to_document
from ..safety import SafetyPolicy, check_safety
from ..screenplay import ChatSession, chat_turn, compile_screenplay, new_storyline_session
from ..serialize import from_plain, to_plain
from ..storyboard import (
    add_scene,
    duplicate_scene,
    link_scenes,
    populate_from_screenplay,
    remove_scene,
    set_scene_interaction,
    set_start,
    unlink_scenes,
)
from ..templates import IMAGE_PROMPT_TEMPLATE, PARAMETER_LABELS
from ..timeline import (
    remove_clip,
    remove_element,
    scene_duration,
    set_particles,
    set_path,
    upsert_clip,
    upsert_element,
)
from ..validation import validate_story
from .config import ServiceConfig, build_providers

_STATUS = {
    "Unauthorized": 401,
    "SafetyBlocked": 403,
    "UnknownStory": 404,
    "UnknownScene": 404,
    "UnknownElement": 404,
    "UnknownClip": 404,
    "UnknownAsset": 404,
    "UnknownJob": 404,
    "UnknownSession": 404,
    "UnknownResponse": 404,
    "DuplicateEdge": 409,
    "AmbiguousSuccessor": 409,
    "OverlapConflict": 409,
    "RemovingStartScene": 409,
    "NotAwaitingInput": 409,
    "NotPlaying": 409,
    "QueueFull": 429,
    "ProviderError": 502,
}

_REQUEST_TYPES = {
    "image": ImageRequest,
    "audio": AudioRequest,
    "speech": SpeechRequest,
    "segmentation": SegmentationRequest,
}


class EventBus:
    """Monotonic event feed with long-poll reads."""

    def __init__(self, capacity: int = 4096):
        self._cond = threading.Condition()
        self._entries: deque[dict] = deque(maxlen=capacity)
        self._seq = 0

    def publish(self, kind: str, data: dict) -> None:
        with self._cond:
            self._seq += 1
            self._entries.append({"seq": self._seq, "kind": kind, "data": data})
            self._cond.notify_all()

    def since(self, after: int, timeout: float) -> tuple[list[dict], int]:
        deadline = time.monotonic() + max(0.0, min(timeout, 30.0))
        with self._cond:
            while self._seq <= after:
                left = deadline - time.monotonic()
                if left <= 0:
                    break
                self._cond.wait(left)
            return [e for e in self._entries if e["seq"] > after], self._seq


class _PlaybackSession:
    def __init__(self, session_id: str, story: Story, mode: str, dt: float):
        self.session_id = session_id
        self.story = story
        self.mode = mode
        self.dt = dt
        self.lock = threading.Lock()
        self.state: pb.PlaybackState | None = None
        self.stopped = False


def _event_dicts(events) -> list[dict]:
    return [
        {"kind": e.kind.value, "time": e.time, "payload": to_plain(e.payload)} for e in events
    ]


def _job_dict(job: GenerationJob) -> dict:
    type_name = next(t for t, cls in _REQUEST_TYPES.items() if isinstance(job.request, cls))
    return {
        "job_id": job.job_id,
        "type": type_name,
        "state": job.state.value,
        "request": to_plain(job.request),
        "result": list(job.result) if job.result is not None else None,
        "error": job.error,
        "error_code": job.error_code,
        "trigger_warning": job.trigger_warning,
        "transitions": [list(t) for t in job.transitions],
    }


def _decode(cls, data: dict, context: str):
    if not isinstance(data, dict):
        raise BadRequest(f"{context} must be an object")
    try:
        return from_plain(cls, data)
    except (TypeError, ValueError) as exc:
        raise BadRequest(f"bad {context}: {exc}") from exc


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    providers = build_providers(config)
    assets = AssetStore()
    packages = PackageStore(config.store_path)
    policy = SafetyPolicy()
    rng = random.Random(config.rng_seed)
    bus = EventBus()
    queue = JobQueue(
        providers,
        assets,
        policy=policy,
        workers=config.workers,
        backlog=config.backlog,
        rng=rng,
    )
    queue.add_listener(lambda snap: bus.publish("job", _job_dict(snap)))
    library = ExampleLibrary(providers.image, assets) if providers.image else None

    stories: dict[str, Story] = {}
    chats: dict[str, ChatSession] = {}
    sessions: dict[str, _PlaybackSession] = {}
    locks: dict[str, threading.Lock] = {}
    ws_lock = threading.Lock()
    counter = {"playback": 0}

    token = os.environ.get(config.token_env) if config.token_env else None

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        for session in list(sessions.values()):
            session.stopped = True
        queue.close()

    app = FastAPI(title="storyloom", lifespan=lifespan)

    @app.exception_handler(StoryError)
    async def story_error_handler(request: Request, exc: StoryError):
        return JSONResponse(status_code=_STATUS.get(exc.code, 400), content=exc.to_dict())

    @app.middleware("http")
    async def auth_middleware(request: Request, call_next):
        if token is not None and request.url.path != "/health":
            supplied = request.headers.get("authorization", "")
            if supplied != f"Bearer {token}":
                exc = Unauthorized("missing or wrong bearer token")
                return JSONResponse(status_code=401, content=exc.to_dict())
        return await call_next(request)

    # -- workspace helpers --------------------------------------------------

    def lock_for(story_id: str) -> threading.Lock:
        with ws_lock:
            return locks.setdefault(story_id, threading.Lock())

    def get_story(story_id: str) -> Story:
        story = stories.get(story_id)
        if story is None:
            raise UnknownStory(f"no story {story_id!r}", story_id=story_id)
        return story

    def mutate(story_id: str, fn):
        """Read-apply-swap under the story's write lock."""
        with lock_for(story_id):
            story = get_story(story_id)
            updated, extras = fn(story)
            stories[story_id] = updated
        bus.publish("story", {"story_id": story_id})
        return {"story": story_to_document(updated), **extras}

    def indexed(story: Story, asset_id: str) -> Story:
        """Register a workspace asset in the story's index (404 if absent)."""
        return register_asset(story, assets.get_ref(asset_id))

    def get_scene(story: Story, scene_id: str) -> Scene:
        from ..errors import UnknownScene

        scene = story.scenes.get(scene_id)
        if scene is None:
            raise UnknownScene(f"no scene {scene_id!r}", scene_id=scene_id)
        return scene

    # -- meta ---------------------------------------------------------------

    @app.get("/health")
    def health():
        return {"ok": True, "service": "storyloom"}

    @app.get("/labels")
    def labels():
        return {name: to_plain(label) for name, label in PARAMETER_LABELS.items()}

    @app.get("/templates")
    def templates():
        return {"templates": [to_plain(IMAGE_PROMPT_TEMPLATE)]}

    @app.post("/templates/render")
    def render_template(payload: dict = Body(...)):
        values = payload.get("values") or {}
        if not isinstance(values, dict):
            raise BadRequest("values must be an object")
        try:
            prompt = IMAGE_PROMPT_TEMPLATE.render(**values)
        except KeyError as exc:
            raise BadRequest(str(exc)) from exc
        return {"prompt": prompt}

    @app.post("/safety")
    def safety(payload: dict = Body(...)):
        text = payload.get("text", "")
        if not isinstance(text, str):
            raise BadRequest("text must be a string")
        return to_plain(check_safety(text, policy))

    @app.post("/refine")
    def refine(payload: dict = Body(...)):
        if providers.text is None:
            raise ProviderError("no text provider configured")
        prompt = payload.get("prompt", "")
        if not isinstance(prompt, str):
            raise BadRequest("prompt must be a string")
        return {"refined": refine_prompt(prompt, providers.text)}

    @app.get("/library")
    def library_query(query: str = ""):
        if library is None:
            return {"examples": []}
        return {
            "examples": [{"prompt": p, "asset_id": a} for p, a in library.query(query)]
        }

    # -- stories ------------------------------------------------------------

    @app.get("/stories")
    def list_stories():
        return {
            "stories": [
                {
                    "story_id": s.story_id,
                    "title": s.title,
                    "scenes": len(s.scenes),
                    "start_scene": s.start_scene,
                }
                for s in stories.values()
            ]
        }

    @app.post("/stories", status_code=201)
    def create_story(payload: dict = Body(default={})):
        story = new_story(
            title=str(payload.get("title", "")), story_id=payload.get("story_id") or None
        )
        with ws_lock:
            if story.story_id in stories:
                raise BadRequest(f"story {story.story_id!r} already exists")
            stories[story.story_id] = story
        bus.publish("story", {"story_id": story.story_id})
        return {"story": story_to_document(story)}

    @app.get("/stories/{story_id}")
    def read_story(story_id: str):
        return {"story": story_to_document(get_story(story_id))}

    @app.delete("/stories/{story_id}")
    def delete_story(story_id: str):
        with lock_for(story_id):
            get_story(story_id)
            del stories[story_id]
            chats.pop(story_id, None)
        bus.publish("story", {"story_id": story_id, "deleted": True})
        return {"deleted": story_id}

    @app.get("/stories/{story_id}/validate")
    def validate(story_id: str):
        return {"violations": [to_plain(v) for v in validate_story(get_story(story_id))]}

    @app.post("/stories/{story_id}/save")
    def save(story_id: str):
        with lock_for(story_id):
            story = get_story(story_id)
            package_id = packages.save(story, assets)
        return {"package_id": package_id, "path": str(packages.package_path(package_id))}

    @app.post("/stories/load")
    def load(payload: dict = Body(...)):
        package_id = payload.get("package_id", "")
        story = packages.load(package_id, assets)
        with ws_lock:
            stories[story.story_id] = story
        bus.publish("story", {"story_id": story.story_id})
        return {"story": story_to_document(story)}

    @app.get("/packages")
    def list_packages():
        return {"packages": packages.list_packages()}

    @app.get("/stories/{story_id}/export")
    def export(story_id: str):
        import tempfile
        from pathlib import Path

        story = get_story(story_id)
        with tempfile.TemporaryDirectory() as tmp:
            path = export_package(story, assets, Path(tmp) / f"{story_id}.zip")
            blob = path.read_bytes()
        return Response(
            content=blob,
            media_type="application/zip",
            headers={"Content-Disposition": f'attachment; filename="{story_id}.zip"'},
        )

    # -- chat and compilation ----------------------------------------------

    @app.get("/stories/{story_id}/chat")
    def read_chat(story_id: str):
        get_story(story_id)
        session = chats.get(story_id)
        messages = list(session.messages) if session else []
        return {"messages": [to_plain(m) for m in messages]}

    @app.post("/stories/{story_id}/chat")
    def chat(story_id: str, payload: dict = Body(...)):
        if providers.text is None:
            raise ProviderError("no text provider configured")
        text = payload.get("text", "")
        if not isinstance(text, str):
            raise BadRequest("text must be a string")
        with lock_for(story_id):
            get_story(story_id)
            session = chats.get(story_id) or new_storyline_session()
            session, reply = chat_turn(session, text, providers.text)
            chats[story_id] = session
        return {"reply": reply, "messages": [to_plain(m) for m in session.messages]}

    @app.delete("/stories/{story_id}/chat")
    def reset_chat(story_id: str):
        get_story(story_id)
        chats.pop(story_id, None)
        return {"messages": []}

    @app.put("/stories/{story_id}/storyline")
    def set_storyline(story_id: str, payload: dict = Body(...)):
        text = payload.get("text", "")
        if not isinstance(text, str):
            raise BadRequest("text must be a string")
        return mutate(story_id, lambda s: (replace(s, storyline=text), {}))

    @app.post("/stories/{story_id}/compile")
    def compile_story(story_id: str, payload: dict = Body(default={})):
        if providers.text is None:
            raise ProviderError("no text provider configured")
        supplied = payload.get("storyline")
        with lock_for(story_id):
            story = get_story(story_id)
            storyline = supplied if isinstance(supplied, str) and supplied.strip() else story.storyline
            if not storyline.strip():
                raise EmptyStoryline("no storyline on the story and none supplied")
            report = compile_screenplay(storyline, providers.text)
            if not report.rejected:
                stories[story_id] = replace(
                    story, storyline=storyline, screenplay=report.scenes
                )
        if not report.rejected:
            bus.publish("story", {"story_id": story_id})
        return {
            "scenes": [to_plain(s) for s in report.scenes],
            "repairs": list(report.repairs),
            "rejected": report.rejected,
        }

    @app.post("/stories/{story_id}/populate")
    def populate(story_id: str):
        def fn(story: Story):
            if not story.screenplay:
                raise BadRequest("story has no compiled screenplay")
            updated, warnings = populate_from_screenplay(
                story, story.screenplay, providers.image, assets, rng=rng
            )
            return updated, {"warnings": list(warnings)}

        return mutate(story_id, fn)

    # -- storyboard ---------------------------------------------------------

    @app.post("/stories/{story_id}/scenes", status_code=201)
    def create_scene(story_id: str, payload: dict = Body(default={})):
        def fn(story: Story):
            updated, sid = add_scene(
                story,
                title=str(payload.get("title", "")),
                background_description=str(payload.get("background_description", "")),
            )
            return updated, {"scene_id": sid}

        return mutate(story_id, fn)

    @app.delete("/stories/{story_id}/scenes/{scene_id}")
    def delete_scene(story_id: str, scene_id: str):
        def fn(story: Story):
            updated, warnings = remove_scene(story, scene_id)
            return updated, {"warnings": list(warnings)}

        return mutate(story_id, fn)

    @app.post("/stories/{story_id}/scenes/{scene_id}/duplicate", status_code=201)
    def duplicate(story_id: str, scene_id: str):
        def fn(story: Story):
            updated, sid = duplicate_scene(story, scene_id)
            return updated, {"scene_id": sid}

        return mutate(story_id, fn)

    @app.post("/stories/{story_id}/links")
    def create_link(story_id: str, payload: dict = Body(...)):
        return mutate(
            story_id,
            lambda s: (
                link_scenes(
                    s,
                    str(payload.get("from", "")),
                    str(payload.get("to", "")),
                    payload.get("via"),
                ),
                {},
            ),
        )

    @app.post("/stories/{story_id}/links/remove")
    def drop_link(story_id: str, payload: dict = Body(...)):
        return mutate(
            story_id,
            lambda s: (
                unlink_scenes(
                    s,
                    str(payload.get("from", "")),
                    str(payload.get("to", "")),
                    payload.get("via"),
                ),
                {},
            ),
        )

    @app.put("/stories/{story_id}/start")
    def change_start(story_id: str, payload: dict = Body(...)):
        return mutate(story_id, lambda s: (set_start(s, str(payload.get("scene_id", ""))), {}))

    # -- scene editing ------------------------------------------------------

    @app.put("/stories/{story_id}/scenes/{scene_id}")
    def update_scene(story_id: str, scene_id: str, payload: dict = Body(...)):
        def fn(story: Story):
            scene = get_scene(story, scene_id)
            if "title" in payload:
                scene = replace(scene, title=str(payload["title"]))
            if "background_description" in payload:
                scene = replace(scene, background_description=str(payload["background_description"]))
            if "background" in payload:
                background = payload["background"]
                if background is not None:
                    story = indexed(story, background)
                scene = replace(scene, background=background)
            return with_scene(story, scene), {}

        return mutate(story_id, fn)

    @app.put("/stories/{story_id}/scenes/{scene_id}/elements")
    def put_element(story_id: str, scene_id: str, payload: dict = Body(...)):
        def fn(story: Story):
            scene = get_scene(story, scene_id)
            data = dict(payload)
            if not data.get("element_id"):
                data["element_id"] = next_element_id(scene)
            element = _decode(SceneElement, data, "element")
            if element.asset is not None:
                story = indexed(story, element.asset)
            return with_scene(story, upsert_element(scene, element)), {
                "element_id": element.element_id
            }

        return mutate(story_id, fn)

    @app.delete("/stories/{story_id}/scenes/{scene_id}/elements/{element_id}")
    def drop_element(story_id: str, scene_id: str, element_id: str):
        def fn(story: Story):
            scene = get_scene(story, scene_id)
            return with_scene(story, remove_element(scene, element_id)), {}

        return mutate(story_id, fn)

    @app.put("/stories/{story_id}/scenes/{scene_id}/elements/{element_id}/path")
    def put_path(story_id: str, scene_id: str, element_id: str, payload: dict = Body(...)):
        raw = payload.get("path")
        if raw is not None:
            try:
                raw = ((float(raw[0][0]), float(raw[0][1])), (float(raw[1][0]), float(raw[1][1])))
            except (TypeError, ValueError, IndexError) as exc:
                raise BadRequest("path must be [[x0, y0], [x1, y1]] or null") from exc

        def fn(story: Story):
            scene = get_scene(story, scene_id)
            return with_scene(story, set_path(scene, element_id, raw)), {}

        return mutate(story_id, fn)

    @app.put("/stories/{story_id}/scenes/{scene_id}/particles")
    def put_particles(story_id: str, scene_id: str, payload: dict = Body(...)):
        try:
            effect = ParticleEffect(str(payload.get("effect", "none")))
        except ValueError as exc:
            raise BadRequest(
                f"effect must be one of {[e.value for e in ParticleEffect]}"
            ) from exc

        def fn(story: Story):
            scene = get_scene(story, scene_id)
            return with_scene(story, set_particles(scene, effect)), {}

        return mutate(story_id, fn)

    @app.put("/stories/{story_id}/scenes/{scene_id}/clips")
    def put_clip(story_id: str, scene_id: str, payload: dict = Body(...)):
        def fn(story: Story):
            scene = get_scene(story, scene_id)
            data = dict(payload)
            if not data.get("clip_id"):
                data["clip_id"] = next_clip_id(scene)
            clip = _decode(TimelineClip, data, "clip")
            if clip.track is not Track.VISUAL:
                story = indexed(story, clip.target)
            updated = upsert_clip(scene, clip, known_assets=set(story.asset_index))
            return with_scene(story, updated), {"clip_id": clip.clip_id}

        return mutate(story_id, fn)

    @app.delete("/stories/{story_id}/scenes/{scene_id}/clips/{clip_id}")
    def drop_clip(story_id: str, scene_id: str, clip_id: str):
        def fn(story: Story):
            scene = get_scene(story, scene_id)
            return with_scene(story, remove_clip(scene, clip_id)), {}

        return mutate(story_id, fn)

    @app.get("/stories/{story_id}/scenes/{scene_id}/duration")
    def read_duration(story_id: str, scene_id: str):
        scene = get_scene(get_story(story_id), scene_id)
        return {"duration_s": scene_duration(scene)}

    @app.put("/stories/{story_id}/scenes/{scene_id}/interaction")
    def put_interaction(story_id: str, scene_id: str, payload: dict | None = Body(default=None)):
        def fn(story: Story):
            spec = None
            if payload is not None:
                spec = _decode(InteractionSpec, payload, "interaction")
                for r in spec.responses:
                    if r.feedback_audio is not None:
                        story = indexed(story, r.feedback_audio)
                if spec.question_audio is not None:
                    story = indexed(story, spec.question_audio)
            updated, warnings = set_scene_interaction(story, scene_id, spec)
            return updated, {"warnings": list(warnings)}

        return mutate(story_id, fn)

    # -- voice profiles -----------------------------------------------------

    @app.put("/stories/{story_id}/voices")
    def put_voice(story_id: str, payload: dict = Body(...)):
        profile = _decode(VoiceProfile, payload, "voice profile")
        if not profile.name.strip():
            raise BadRequest("voice profile needs a name")
        from ..errors import RangeError

        if profile.speed <= 0:
            raise RangeError(f"speed {profile.speed} must be positive", field="speed")

        def fn(story: Story):
            profiles = dict(story.voice_profiles)
            profiles[profile.name] = profile
            return replace(story, voice_profiles=profiles), {}

        return mutate(story_id, fn)

    @app.delete("/stories/{story_id}/voices/{name}")
    def drop_voice(story_id: str, name: str):
        def fn(story: Story):
            if name not in story.voice_profiles:
                raise BadRequest(f"no voice profile {name!r}")
            profiles = {k: v for k, v in story.voice_profiles.items() if k != name}
            return replace(story, voice_profiles=profiles), {}

        return mutate(story_id, fn)

    # -- assets and generation ---------------------------------------------

    @app.get("/assets/{asset_id}")
    def read_asset(asset_id: str):
        ref = assets.get_ref(asset_id)
        return Response(content=assets.get_bytes(asset_id), media_type=ref.media_type)

    @app.get("/assets/{asset_id}/ref")
    def read_asset_ref(asset_id: str):
        return to_plain(assets.get_ref(asset_id))

    def _decode_generation(payload: dict) -> GenerationRequest:
        if not isinstance(payload, dict):
            raise BadRequest("request must be an object")
        type_name = payload.get("type")
        cls = _REQUEST_TYPES.get(type_name)
        if cls is None:
            raise BadRequest(
                f"type must be one of {sorted(_REQUEST_TYPES)}", supplied=type_name
            )
        data = {k: v for k, v in payload.items() if k not in ("type", "story_id", "profile_name")}
        if cls is SpeechRequest and "profile_name" in payload:
            story = get_story(str(payload.get("story_id", "")))
            name = payload["profile_name"]
            profile = story.voice_profiles.get(name)
            if profile is None:
                raise BadRequest(f"story has no voice profile {name!r}")
            data["profile"] = to_plain(profile)
        return _decode(cls, data, "generation request")

    @app.post("/generate", status_code=202)
    def generate(payload: dict = Body(...)):
        request = _decode_generation(payload)
        return _job_dict(queue.submit(request))

    @app.get("/jobs")
    def list_jobs():
        return {"jobs": [_job_dict(j) for j in queue.jobs()]}

    @app.get("/jobs/{job_id}")
    def read_job(job_id: str):
        return _job_dict(queue.poll(job_id))

    @app.post("/jobs/{job_id}/cancel")
    def cancel_job(job_id: str):
        return _job_dict(queue.cancel(job_id))

    # -- playback -----------------------------------------------------------

    def _session(session_id: str) -> _PlaybackSession:
        session = sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no playback session {session_id!r}", session_id=session_id)
        return session

    def _publish_playback(session: _PlaybackSession, events) -> None:
        bus.publish(
            "playback",
            {
                "session": session.session_id,
                "state": to_plain(session.state),
                "events": _event_dicts(events),
            },
        )

    def _clock_loop(session: _PlaybackSession) -> None:
        while not session.stopped:
            time.sleep(session.dt)
            with session.lock:
                if session.stopped or session.state.phase is not pb.Phase.PLAYING:
                    return
                session.state, events = pb.tick(session.story, session.state, session.dt)
            _publish_playback(session, events)

    @app.post("/stories/{story_id}/playback", status_code=201)
    def start_playback(story_id: str, payload: dict = Body(default={})):
        mode = payload.get("mode", "clock")
        if mode not in ("clock", "manual"):
            raise BadRequest("mode must be 'clock' or 'manual'")
        dt = payload.get("dt", 0.25)
        if not isinstance(dt, (int, float)) or dt <= 0:
            raise BadRequest("dt must be a positive number")
        story = get_story(story_id)
        state, events = pb.start(story)
        with ws_lock:
            counter["playback"] += 1
            session = _PlaybackSession(f"p{counter['playback']}", story, mode, float(dt))
            session.state = state
            sessions[session.session_id] = session
        _publish_playback(session, events)
        if mode == "clock":
            threading.Thread(
                target=_clock_loop, args=(session,), name=session.session_id, daemon=True
            ).start()
        return {
            "session_id": session.session_id,
            "mode": mode,
            "state": to_plain(state),
            "events": _event_dicts(events),
        }

    @app.get("/playback/{session_id}")
    def read_playback(session_id: str):
        session = _session(session_id)
        with session.lock:
            return {"session_id": session_id, "mode": session.mode, "state": to_plain(session.state)}

    @app.post("/playback/{session_id}/tick")
    def tick_playback(session_id: str, payload: dict = Body(default={})):
        session = _session(session_id)
        if session.mode != "manual":
            raise BadRequest("session runs on the server clock; ticks are not accepted")
        dt = payload.get("dt", session.dt)
        with session.lock:
            session.state, events = pb.tick(session.story, session.state, dt)
            state = session.state
        _publish_playback(session, events)
        return {"state": to_plain(state), "events": _event_dicts(events)}

    @app.post("/playback/{session_id}/respond")
    def respond_playback(session_id: str, payload: dict = Body(...)):
        session = _session(session_id)
        label = payload.get("label", "")
        with session.lock:
            session.state, events = pb.submit_response(session.story, session.state, label)
            state = session.state
        _publish_playback(session, events)
        return {"state": to_plain(state), "events": _event_dicts(events)}

    @app.delete("/playback/{session_id}")
    def stop_playback(session_id: str):
        session = _session(session_id)
        session.stopped = True
        with ws_lock:
            sessions.pop(session_id, None)
        return {"stopped": session_id}

    # -- events -------------------------------------------------------------

    @app.get("/events")
    def events(after: int = Query(default=0), timeout: float = Query(default=25.0)):
        entries, seq = bus.since(after, timeout)
        return {"events": entries, "next": seq}

    app.state.config = config
    app.state.assets = assets
    app.state.queue = queue
    app.state.bus = bus
    app.state.stories = stories
    app.state.packages = packages
    return app
