"""Story data model.

All types are immutable value objects; operations elsewhere return updated
copies.  Constructors do not validate: a Story loaded from disk or built by
hand may be broken, and ``validation.validate_story`` reports how.  Every
type carries an ``extra`` dict that preserves fields written by newer
versions of the format.

Canvas coordinates are normalized to the unit square: (0, 0) is the top
left, (1, 1) the bottom right, so stories are resolution independent.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field, replace
from enum import Enum

SCHEMA_VERSION = 1


class AssetKind(str, Enum):
    IMAGE = "image"
    CHARACTER_CUTOUT = "character_cutout"
    AUDIO_EFFECT = "audio_effect"
    MUSIC = "music"
    SPEECH = "speech"


class ElementKind(str, Enum):
    CHARACTER = "character"
    SPEECH_BUBBLE = "speech_bubble"
    BACKGROUND = "background"


class Track(str, Enum):
    VISUAL = "visual"
    AUDIO = "audio"
    SPEECH = "speech"


class ParticleEffect(str, Enum):
    NONE = "none"
    RAIN = "rain"
    SNOW = "snow"


@dataclass(frozen=True)
class Provenance:
    """How an asset came to exist; kept verbatim for reproducibility."""

    provider_name: str
    prompt: str
    negative_prompt: str = ""
    params: dict = field(default_factory=dict)
    seed: int | None = None
    created_at: str = ""
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AssetRef:
    """Reference to stored media; ``asset_id`` is the sha256 of the bytes."""

    asset_id: str
    kind: AssetKind
    media_type: str
    provenance: Provenance
    byte_length: int
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VoiceProfile:
    name: str
    voice_id: str
    pitch: float = 0.0
    speed: float = 1.0
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SceneElement:
    """One item on the scene canvas.

    ``path`` gives start and end positions; playback interpolates between
    them over the element's visual clip.  ``size`` is (width, height) in
    canvas units.
    """

    element_id: str
    kind: ElementKind
    asset: str | None = None
    text: str | None = None
    size: tuple[float, float] = (0.2, 0.2)
    path: tuple[tuple[float, float], tuple[float, float]] | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TimelineClip:
    """Half-open interval [start_s, start_s + duration_s) on one track.

    ``target`` is an element id on the visual track and an asset id on the
    audio and speech tracks.
    """

    clip_id: str
    target: str
    track: Track
    start_s: float
    duration_s: float
    extra: dict = field(default_factory=dict)

    @property
    def end_s(self) -> float:
        return self.start_s + self.duration_s


@dataclass(frozen=True)
class Response:
    """One answer a viewer can pick; ``next_scene`` None means the story
    ends there."""

    label: str
    feedback_audio: str | None = None
    next_scene: str | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class InteractionSpec:
    question: str
    responses: tuple[Response, ...] = ()
    question_audio: str | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Scene:
    scene_id: str
    title: str = ""
    background: str | None = None
    background_description: str = ""
    elements: tuple[SceneElement, ...] = ()
    clips: tuple[TimelineClip, ...] = ()
    particle_effect: ParticleEffect = ParticleEffect.NONE
    interaction: InteractionSpec | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    """Directed link between scenes; ``via`` names the response label that
    takes it, and must be set exactly when the source scene is interactive."""

    from_scene: str
    to_scene: str
    via: str | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DialogueLine:
    speaker: str
    speech: str
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ScreenplayScene:
    """One scene of the writer's screenplay; field names follow the wire
    schema the writing model is asked to produce."""

    sceneName: str
    backgroundDescription: str = ""
    narration: str = ""
    characters: tuple[str, ...] = ()
    dialogue: tuple[DialogueLine, ...] = ()
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Story:
    story_id: str
    title: str = ""
    storyline: str = ""
    screenplay: tuple[ScreenplayScene, ...] = ()
    scenes: dict[str, Scene] = field(default_factory=dict)
    start_scene: str | None = None
    edges: tuple[Edge, ...] = ()
    voice_profiles: dict[str, VoiceProfile] = field(default_factory=dict)
    asset_index: dict[str, AssetRef] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    extra: dict = field(default_factory=dict)


def new_story(title: str = "", story_id: str | None = None) -> Story:
    return Story(story_id=story_id or uuid.uuid4().hex[:12], title=title)


def next_scene_id(story: Story) -> str:
    n = 1
    while f"s{n}" in story.scenes:
        n += 1
    return f"s{n}"


def next_element_id(scene: Scene) -> str:
    used = {e.element_id for e in scene.elements}
    n = 1
    while f"e{n}" in used:
        n += 1
    return f"e{n}"


def next_clip_id(scene: Scene) -> str:
    used = {c.clip_id for c in scene.clips}
    n = 1
    while f"c{n}" in used:
        n += 1
    return f"c{n}"


def with_scene(story: Story, scene: Scene) -> Story:
    """Return the story with ``scene`` inserted or replaced by id."""
    scenes = dict(story.scenes)
    scenes[scene.scene_id] = scene
    return replace(story, scenes=scenes)


def register_asset(story: Story, ref: AssetRef) -> Story:
    """Record ``ref`` in the story's asset index so saves can package it."""
    index = dict(story.asset_index)
    index[ref.asset_id] = ref
    return replace(story, asset_index=index)
