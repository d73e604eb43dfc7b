"""Scene canvas and timeline editing.

All operations are pure ``Scene -> Scene``; compose with
``model.with_scene`` to write the result back into a story.  Clips are
half-open intervals, so one ending exactly where another starts is not
an overlap.  Scene duration is simply the latest clip end; a scene with
no clips has duration 0 and flies past during playback.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Collection

from .errors import (
    InvalidElement,
    InvalidInteraction,
    NonPositiveDuration,
    OutOfCanvas,
    OverlapConflict,
    RangeError,
    UnknownClip,
    UnknownElement,
    UnknownTarget,
)
from .model import (
    ElementKind,
    InteractionSpec,
    ParticleEffect,
    Scene,
    SceneElement,
    TimelineClip,
    Track,
)
from .validation import clips_overlap

Path = tuple[tuple[float, float], tuple[float, float]]


def _check_path(path: Path) -> None:
    for x, y in path:
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise OutOfCanvas(f"({x}, {y}) is outside the unit canvas", point=[x, y])


def upsert_element(scene: Scene, element: SceneElement) -> Scene:
    w, h = element.size
    if w <= 0 or h <= 0:
        raise InvalidElement(f"size {element.size} must be positive", element_id=element.element_id)
    if element.kind is ElementKind.SPEECH_BUBBLE and not (element.text or "").strip():
        raise InvalidElement("speech bubble needs text", element_id=element.element_id)
    if element.kind is ElementKind.CHARACTER and element.asset is None:
        raise InvalidElement("character needs a cutout asset", element_id=element.element_id)
    if element.path is not None:
        _check_path(element.path)
    elements = tuple(e for e in scene.elements if e.element_id != element.element_id)
    return replace(scene, elements=elements + (element,))


def remove_element(scene: Scene, element_id: str) -> Scene:
    """Remove an element and any visual clips that animate it."""
    if not any(e.element_id == element_id for e in scene.elements):
        raise UnknownElement(f"no element {element_id!r}", element_id=element_id)
    return replace(
        scene,
        elements=tuple(e for e in scene.elements if e.element_id != element_id),
        clips=tuple(
            c for c in scene.clips if not (c.track is Track.VISUAL and c.target == element_id)
        ),
    )


def set_path(scene: Scene, element_id: str, path: Path | None) -> Scene:
    for element in scene.elements:
        if element.element_id == element_id:
            if path is not None:
                _check_path(path)
            return upsert_element(scene, replace(element, path=path))
    raise UnknownElement(f"no element {element_id!r}", element_id=element_id)


def set_particles(scene: Scene, effect: ParticleEffect) -> Scene:
    return replace(scene, particle_effect=effect)


def upsert_clip(
    scene: Scene, clip: TimelineClip, known_assets: Collection[str] | None = None
) -> Scene:
    """Insert or replace a clip.

    Visual clips must target an element of the scene.  Audio and speech
    clips target assets; pass ``known_assets`` to have that existence
    checked here (the validator checks it against the story regardless).
    """
    if clip.duration_s <= 0:
        raise NonPositiveDuration(f"duration {clip.duration_s}", clip_id=clip.clip_id)
    if clip.start_s < 0:
        raise RangeError(f"start {clip.start_s} is negative", field="start_s", value=clip.start_s)
    if clip.track is Track.VISUAL:
        if not any(e.element_id == clip.target for e in scene.elements):
            raise UnknownTarget(f"no element {clip.target!r} in scene", target=clip.target)
    elif known_assets is not None and clip.target not in known_assets:
        raise UnknownTarget(f"no asset {clip.target!r}", target=clip.target)
    for other in scene.clips:
        if other.clip_id == clip.clip_id:
            continue
        if (
            other.track is clip.track
            and other.target == clip.target
            and clips_overlap(clip.start_s, clip.duration_s, other.start_s, other.duration_s)
        ):
            raise OverlapConflict(
                f"[{clip.start_s}, {clip.end_s}) overlaps {other.clip_id} "
                f"[{other.start_s}, {other.end_s}) on {clip.track.value}/{clip.target}",
                clip_id=clip.clip_id,
                other=other.clip_id,
            )
    clips = tuple(c for c in scene.clips if c.clip_id != clip.clip_id)
    return replace(scene, clips=clips + (clip,))


def remove_clip(scene: Scene, clip_id: str) -> Scene:
    if not any(c.clip_id == clip_id for c in scene.clips):
        raise UnknownClip(f"no clip {clip_id!r}", clip_id=clip_id)
    return replace(scene, clips=tuple(c for c in scene.clips if c.clip_id != clip_id))


def scene_duration(scene: Scene) -> float:
    return max((c.end_s for c in scene.clips), default=0.0)


def set_interaction(scene: Scene, spec: InteractionSpec | None) -> Scene:
    if spec is not None:
        if not spec.question.strip():
            raise InvalidInteraction("question is empty")
        if len(spec.responses) < 2:
            raise InvalidInteraction(f"{len(spec.responses)} responses; need at least 2")
        labels = [r.label for r in spec.responses]
        if len(set(labels)) != len(labels):
            raise InvalidInteraction(f"duplicate labels in {labels}")
        if any(not label.strip() for label in labels):
            raise InvalidInteraction("blank response label")
    return replace(scene, interaction=spec)


def path_position(element: SceneElement, progress: float) -> tuple[float, float]:
    """Position along the element's waypoint path at ``progress`` in [0, 1].

    Each path segment takes an equal share of the progress range; without
    a path the element sits at the canvas center.
    """
    if not element.path:
        return (0.5, 0.5)
    points = element.path
    if len(points) == 1:
        return points[0]
    p = min(1.0, max(0.0, progress))
    scaled = p * (len(points) - 1)
    index = min(int(scaled), len(points) - 2)
    local = scaled - index
    (x0, y0), (x1, y1) = points[index], points[index + 1]
    return (x0 + (x1 - x0) * local, y0 + (y1 - y0) * local)
