"""Deterministic story playback.

The interpreter turns (story, tick schedule, viewer responses) into an
event stream; no hidden clock or randomness, so the same inputs always
produce the same events.  Event times are scene-local seconds.

Boundary events (clip starts/ends, prompts, transitions) carry the exact
boundary time from the clip table and do not depend on how a span of
time is divided into ticks: a start at s fires in the tick covering
[t0, t1) with s in it, an end at e in the tick with e in (t0, t1].
``element_move`` events are position samples taken at each tick's end
and so naturally differ with tick granularity.

Scene exits clear the canvas implicitly: no element_hide events are
emitted for still-visible elements at a transition.  Elements that no
visual clip animates are shown statically for the whole scene at entry.
One tick may cross several scenes; a run of zero-duration scenes is
traversed at most once around the story per tick, so a zero-length
cycle cannot hang the interpreter.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import (
    InvalidStory,
    InvalidTick,
    NotAwaitingInput,
    NotPlaying,
    UnknownResponse,
)
from .model import ElementKind, ParticleEffect, Scene, SceneElement, Story, Track
from .serialize import to_plain
from .timeline import path_position, scene_duration
from .validation import (
    errors_only,
    resolve_response_target,
    resolve_successor,
    validate_story,
)


class Phase(str, Enum):
    PLAYING = "playing"
    AWAITING_INPUT = "awaiting_input"
    FINISHED = "finished"


class EventKind(str, Enum):
    SCENE_ENTER = "scene_enter"
    SCENE_EXIT = "scene_exit"
    ELEMENT_SHOW = "element_show"
    ELEMENT_HIDE = "element_hide"
    ELEMENT_MOVE = "element_move"
    BUBBLE_SHOW = "bubble_show"
    AUDIO_START = "audio_start"
    AUDIO_STOP = "audio_stop"
    SPEECH_START = "speech_start"
    PARTICLES = "particles"
    INTERACTION_PROMPT = "interaction_prompt"
    STORY_END = "story_end"


@dataclass(frozen=True)
class PlaybackEvent:
    kind: EventKind
    time: float
    payload: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PlaybackState:
    story_id: str
    current_scene: str
    t: float
    phase: Phase
    history: tuple[tuple[str, str | None], ...] = ()


def event_to_json(event: PlaybackEvent) -> str:
    return json.dumps(
        {"kind": event.kind.value, "time": event.time, "payload": to_plain(event.payload)},
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )


def trace_lines(events: Sequence[PlaybackEvent]) -> list[str]:
    return [event_to_json(e) for e in events]


def _visual_clips(scene: Scene, element_id: str):
    return [c for c in scene.clips if c.track is Track.VISUAL and c.target == element_id]


def _show_event(scene: Scene, element: SceneElement, time: float, clip_id: str | None,
                static: bool = False) -> PlaybackEvent:
    position = list(path_position(element, 0.0))
    if element.kind is ElementKind.SPEECH_BUBBLE:
        payload = {
            "scene": scene.scene_id,
            "element": element.element_id,
            "text": element.text or "",
            "position": position,
            "size": list(element.size),
        }
        kind = EventKind.BUBBLE_SHOW
    else:
        payload = {
            "scene": scene.scene_id,
            "element": element.element_id,
            "element_kind": element.kind.value,
            "asset": element.asset,
            "position": position,
            "size": list(element.size),
        }
        kind = EventKind.ELEMENT_SHOW
    if clip_id is not None:
        payload["clip"] = clip_id
    if static:
        payload["static"] = True
    return PlaybackEvent(kind, time, payload)


def _enter_events(scene: Scene, events: list[PlaybackEvent]) -> None:
    events.append(
        PlaybackEvent(
            EventKind.SCENE_ENTER,
            0.0,
            {"scene": scene.scene_id, "title": scene.title, "background": scene.background},
        )
    )
    if scene.particle_effect is not ParticleEffect.NONE:
        events.append(
            PlaybackEvent(
                EventKind.PARTICLES,
                0.0,
                {"scene": scene.scene_id, "effect": scene.particle_effect.value},
            )
        )
    for element in scene.elements:
        if not _visual_clips(scene, element.element_id):
            events.append(_show_event(scene, element, 0.0, None, static=True))


def _segment_events(scene: Scene, t0: float, t1: float, events: list[PlaybackEvent]) -> None:
    """Events for advancing this scene's local clock across [t0, t1)."""
    by_element = {e.element_id: e for e in scene.elements}
    seg: list[tuple[float, int, int, PlaybackEvent]] = []
    for idx, clip in enumerate(scene.clips):
        s, e = clip.start_s, clip.end_s
        if t0 <= s < t1:
            if clip.track is Track.VISUAL:
                element = by_element.get(clip.target)
                if element is not None:
                    seg.append((s, 1, idx, _show_event(scene, element, s, clip.clip_id)))
            elif clip.track is Track.AUDIO:
                seg.append(
                    (s, 1, idx, PlaybackEvent(
                        EventKind.AUDIO_START, s,
                        {"scene": scene.scene_id, "asset": clip.target, "clip": clip.clip_id},
                    ))
                )
            else:
                seg.append(
                    (s, 1, idx, PlaybackEvent(
                        EventKind.SPEECH_START, s,
                        {"scene": scene.scene_id, "asset": clip.target, "clip": clip.clip_id,
                         "duration": clip.duration_s},
                    ))
                )
        if t0 < e <= t1:
            if clip.track is Track.VISUAL:
                seg.append(
                    (e, 0, idx, PlaybackEvent(
                        EventKind.ELEMENT_HIDE, e,
                        {"scene": scene.scene_id, "element": clip.target, "clip": clip.clip_id},
                    ))
                )
            elif clip.track is Track.AUDIO:
                seg.append(
                    (e, 0, idx, PlaybackEvent(
                        EventKind.AUDIO_STOP, e,
                        {"scene": scene.scene_id, "asset": clip.target, "clip": clip.clip_id},
                    ))
                )
            # a speech clip running out has no audible stop
    offset = len(scene.clips)
    for idx, element in enumerate(scene.elements):
        if element.path is None:
            continue
        for clip in _visual_clips(scene, element.element_id):
            if clip.start_s <= t1 < clip.end_s:
                progress = (t1 - clip.start_s) / clip.duration_s
                seg.append(
                    (t1, 2, offset + idx, PlaybackEvent(
                        EventKind.ELEMENT_MOVE, t1,
                        {"scene": scene.scene_id, "element": element.element_id,
                         "position": list(path_position(element, progress))},
                    ))
                )
                break
    seg.sort(key=lambda item: (item[0], item[1], item[2]))
    events.extend(ev for _, _, _, ev in seg)


def start(story: Story) -> tuple[PlaybackState, list[PlaybackEvent]]:
    violations = errors_only(validate_story(story))
    if violations:
        raise InvalidStory(
            f"{len(violations)} blocking violations",
            violations=[to_plain(v) for v in violations],
        )
    events: list[PlaybackEvent] = []
    _enter_events(story.scenes[story.start_scene], events)
    state = PlaybackState(
        story_id=story.story_id,
        current_scene=story.start_scene,
        t=0.0,
        phase=Phase.PLAYING,
    )
    return state, events


def tick(story: Story, state: PlaybackState, dt: float) -> tuple[PlaybackState, list[PlaybackEvent]]:
    if state.phase is not Phase.PLAYING:
        raise NotPlaying(f"phase is {state.phase.value}")
    if dt <= 0:
        raise InvalidTick(f"dt {dt} must be positive")
    events: list[PlaybackEvent] = []
    current = state.current_scene
    t = state.t
    remaining = dt
    history = list(state.history)
    phase = Phase.PLAYING
    hops = 0
    while True:
        scene = story.scenes[current]
        duration = scene_duration(scene)
        if t < duration:
            if remaining <= 0:
                break
            t1 = min(duration, t + remaining)
            remaining -= t1 - t
            _segment_events(scene, t, t1, events)
            t = t1
            if t < duration:
                break
            hops = 0
        if scene.interaction is not None:
            events.append(
                PlaybackEvent(
                    EventKind.INTERACTION_PROMPT,
                    duration,
                    {
                        "scene": current,
                        "question": scene.interaction.question,
                        "responses": [r.label for r in scene.interaction.responses],
                        "question_audio": scene.interaction.question_audio,
                    },
                )
            )
            phase = Phase.AWAITING_INPUT
            break
        nxt = resolve_successor(story, current)
        if nxt is None:
            history.append((current, None))
            events.append(PlaybackEvent(EventKind.STORY_END, duration, {"scene": current}))
            phase = Phase.FINISHED
            break
        if hops > len(story.scenes):
            break
        hops += 1
        history.append((current, None))
        events.append(PlaybackEvent(EventKind.SCENE_EXIT, duration, {"scene": current}))
        current = nxt
        t = 0.0
        _enter_events(story.scenes[current], events)
    return (
        PlaybackState(state.story_id, current, t, phase, tuple(history)),
        events,
    )


def submit_response(
    story: Story, state: PlaybackState, label: str
) -> tuple[PlaybackState, list[PlaybackEvent]]:
    if state.phase is not Phase.AWAITING_INPUT:
        raise NotAwaitingInput(f"phase is {state.phase.value}")
    scene = story.scenes[state.current_scene]
    spec = scene.interaction
    response = next((r for r in spec.responses if r.label == label), None)
    if response is None:
        raise UnknownResponse(
            f"no response {label!r}", label=label, labels=[r.label for r in spec.responses]
        )
    duration = scene_duration(scene)
    events: list[PlaybackEvent] = []
    if response.feedback_audio is not None:
        events.append(
            PlaybackEvent(
                EventKind.AUDIO_START,
                duration,
                {"scene": scene.scene_id, "asset": response.feedback_audio, "feedback": True},
            )
        )
    history = state.history + ((scene.scene_id, label),)
    target = resolve_response_target(story, scene.scene_id, response)
    if target is None:
        events.append(PlaybackEvent(EventKind.STORY_END, duration, {"scene": scene.scene_id}))
        return (
            PlaybackState(state.story_id, scene.scene_id, duration, Phase.FINISHED, history),
            events,
        )
    events.append(PlaybackEvent(EventKind.SCENE_EXIT, duration, {"scene": scene.scene_id}))
    _enter_events(story.scenes[target], events)
    return (
        PlaybackState(state.story_id, target, 0.0, Phase.PLAYING, history),
        events,
    )


def run_story(
    story: Story,
    responses: Sequence[str] = (),
    dt: float = 0.25,
    max_seconds: float = 600.0,
) -> tuple[PlaybackState, list[PlaybackEvent]]:
    """Drive a story to its end (or until responses run out) and collect
    the full event trace."""
    state, events = start(story)
    queue = list(responses)
    elapsed = 0.0
    while state.phase is not Phase.FINISHED:
        if state.phase is Phase.AWAITING_INPUT:
            if not queue:
                break
            state, more = submit_response(story, state, queue.pop(0))
        else:
            if elapsed >= max_seconds:
                break
            state, more = tick(story, state, dt)
            elapsed += dt
        events.extend(more)
    return state, events
