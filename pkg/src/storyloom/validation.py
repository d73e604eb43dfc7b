"""Whole-story validation.

``validate_story`` is pure and never raises: broken input yields a list of
``Violation`` records.  Severity ``error`` blocks playback; ``warning`` is
advisory.  ``SCHEMA_CODES`` is the subset that also blocks saving (the
record itself is malformed, not merely the graph).  ``DEFERRABLE_CODES``
are states any half-built story passes through (no start scene yet, scene
not linked in yet, response that ends the story) and are the only codes a
sequence of successful editing operations may leave behind.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .model import (
    AssetKind,
    ElementKind,
    InteractionSpec,
    Response,
    Scene,
    Story,
    Track,
)


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str
    severity: Severity = Severity.ERROR
    extra: dict = field(default_factory=dict)


SCHEMA_CODES = frozenset(
    {
        "SceneIdMismatch",
        "DuplicateElementId",
        "NonPositiveSize",
        "BubbleMissingText",
        "CharacterMissingAsset",
        "PathOutOfCanvas",
        "NonPositiveClipDuration",
        "NegativeClipStart",
        "ClipOverlap",
        "ClipTrackKindMismatch",
        "TooFewResponses",
        "DuplicateResponseLabel",
        "EmptyResponseLabel",
        "VoiceProfileNameMismatch",
        "NonPositiveSpeed",
    }
)

DEFERRABLE_CODES = frozenset(
    {
        "MissingStart",
        "UnreachableScene",
        "TerminalResponse",
        "NoTerminalReachable",
        "SpeakerNotInCharacters",
        "EmptySceneName",
    }
)

_AUDIO_KINDS = {AssetKind.AUDIO_EFFECT, AssetKind.MUSIC}


def _err(code: str, subject: str, message: str, **extra) -> Violation:
    return Violation(code, subject, message, Severity.ERROR, extra)


def _warn(code: str, subject: str, message: str, **extra) -> Violation:
    return Violation(code, subject, message, Severity.WARNING, extra)


def clips_overlap(a_start: float, a_dur: float, b_start: float, b_dur: float) -> bool:
    """Half-open intervals: touching endpoints do not overlap."""
    return a_start < b_start + b_dur and b_start < a_start + a_dur


def response_labels(interaction: InteractionSpec) -> list[str]:
    return [r.label for r in interaction.responses]


def resolve_response_target(story: Story, scene_id: str, response: Response) -> str | None:
    """Scene the given response leads to, or None for end of story.

    A labeled edge wins over the response's own ``next_scene`` record;
    validation flags disagreement between the two.
    """
    for edge in story.edges:
        if edge.from_scene == scene_id and edge.via == response.label:
            return edge.to_scene
    return response.next_scene


def resolve_successor(story: Story, scene_id: str) -> str | None:
    """Single successor of a non-interactive scene, or None if terminal."""
    for edge in story.edges:
        if edge.from_scene == scene_id and edge.via is None:
            return edge.to_scene
    return None


def _check_scene(story: Story, scene: Scene, out: list[Violation]) -> None:
    sid = scene.scene_id
    seen_elements: set[str] = set()
    for el in scene.elements:
        subject = f"{sid}/{el.element_id}"
        if el.element_id in seen_elements:
            out.append(_err("DuplicateElementId", subject, "element id reused in scene"))
        seen_elements.add(el.element_id)
        w, h = el.size
        if w <= 0 or h <= 0:
            out.append(_err("NonPositiveSize", subject, f"size {el.size} must be positive"))
        if el.kind is ElementKind.SPEECH_BUBBLE and not (el.text or "").strip():
            out.append(_err("BubbleMissingText", subject, "speech bubble has no text"))
        if el.kind is ElementKind.CHARACTER and el.asset is None:
            out.append(_err("CharacterMissingAsset", subject, "character has no cutout asset"))
        if el.asset is not None and el.asset not in story.asset_index:
            out.append(_err("UnknownElementAsset", subject, f"asset {el.asset!r} not indexed"))
        if el.path is not None:
            for x, y in el.path:
                if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                    out.append(_err("PathOutOfCanvas", subject, f"path point ({x}, {y}) outside unit canvas"))
                    break

    if scene.background is not None and scene.background not in story.asset_index:
        out.append(_err("UnknownBackgroundAsset", sid, f"background {scene.background!r} not indexed"))

    for i, clip in enumerate(scene.clips):
        subject = f"{sid}/{clip.clip_id}"
        if clip.duration_s <= 0:
            out.append(_err("NonPositiveClipDuration", subject, f"duration {clip.duration_s} must be positive"))
        if clip.start_s < 0:
            out.append(_err("NegativeClipStart", subject, f"start {clip.start_s} is negative"))
        if clip.track is Track.VISUAL:
            if clip.target not in seen_elements:
                out.append(_err("UnknownClipTarget", subject, f"no element {clip.target!r} in scene"))
        else:
            ref = story.asset_index.get(clip.target)
            if ref is None:
                out.append(_err("UnknownClipTarget", subject, f"asset {clip.target!r} not indexed"))
            elif clip.track is Track.AUDIO and ref.kind not in _AUDIO_KINDS:
                out.append(_err("ClipTrackKindMismatch", subject, f"audio clip targets {ref.kind.value} asset"))
            elif clip.track is Track.SPEECH and ref.kind is not AssetKind.SPEECH:
                out.append(_err("ClipTrackKindMismatch", subject, f"speech clip targets {ref.kind.value} asset"))
        for other in scene.clips[:i]:
            if (
                other.track is clip.track
                and other.target == clip.target
                and clips_overlap(clip.start_s, clip.duration_s, other.start_s, other.duration_s)
            ):
                out.append(
                    _err(
                        "ClipOverlap",
                        subject,
                        f"overlaps {other.clip_id} on {clip.track.value}/{clip.target}",
                    )
                )

    if scene.interaction is not None:
        _check_interaction(story, scene, scene.interaction, out)


def _check_interaction(story: Story, scene: Scene, spec: InteractionSpec, out: list[Violation]) -> None:
    sid = scene.scene_id
    if len(spec.responses) < 2:
        out.append(_err("TooFewResponses", sid, f"interaction has {len(spec.responses)} responses, needs 2"))
    seen: set[str] = set()
    for r in spec.responses:
        if not r.label.strip():
            out.append(_err("EmptyResponseLabel", sid, "response label is empty"))
        if r.label in seen:
            out.append(_err("DuplicateResponseLabel", sid, f"label {r.label!r} reused"))
        seen.add(r.label)
        if r.feedback_audio is not None and r.feedback_audio not in story.asset_index:
            out.append(_err("UnknownFeedbackAudio", sid, f"feedback audio {r.feedback_audio!r} not indexed"))
        if r.next_scene is not None and r.next_scene not in story.scenes:
            out.append(_err("DanglingBranchTarget", r.next_scene, f"response {r.label!r} of {sid} targets missing scene"))
        if resolve_response_target(story, sid, r) is None:
            out.append(_warn("TerminalResponse", sid, f"response {r.label!r} ends the story"))
    if spec.question_audio is not None and spec.question_audio not in story.asset_index:
        out.append(_err("UnknownQuestionAudio", sid, f"question audio {spec.question_audio!r} not indexed"))


def _check_edges(story: Story, out: list[Violation]) -> None:
    seen: set[tuple] = set()
    plain_out: dict[str, set[str]] = {}
    labeled: dict[tuple[str, str], set[str]] = {}
    for edge in story.edges:
        subject = f"{edge.from_scene}->{edge.to_scene}"
        key = (edge.from_scene, edge.to_scene, edge.via)
        if key in seen:
            out.append(_err("DuplicateEdge", subject, f"edge repeated (via={edge.via!r})"))
        seen.add(key)
        src = story.scenes.get(edge.from_scene)
        if src is None:
            out.append(_err("DanglingEdge", subject, f"source {edge.from_scene!r} missing"))
        if edge.to_scene not in story.scenes:
            out.append(_err("DanglingEdge", subject, f"target {edge.to_scene!r} missing"))
        if src is None:
            continue
        if src.interaction is None:
            if edge.via is not None:
                out.append(_err("EdgeLabelWithoutInteraction", subject, f"label {edge.via!r} on non-interactive scene"))
            plain_out.setdefault(edge.from_scene, set()).add(edge.to_scene)
        else:
            if edge.via is None:
                out.append(_err("MissingEdgeLabel", subject, "edge from interactive scene has no label"))
                continue
            labels = response_labels(src.interaction)
            if edge.via not in labels:
                out.append(_err("UnknownEdgeLabel", subject, f"label {edge.via!r} matches no response"))
                continue
            labeled.setdefault((edge.from_scene, edge.via), set()).add(edge.to_scene)
            response = next(r for r in src.interaction.responses if r.label == edge.via)
            if response.next_scene is not None and response.next_scene != edge.to_scene:
                out.append(
                    _err(
                        "InconsistentBranchRouting",
                        subject,
                        f"edge goes to {edge.to_scene!r} but response records {response.next_scene!r}",
                    )
                )
    for sid, targets in plain_out.items():
        if len(targets) > 1:
            out.append(_err("AmbiguousSuccessor", sid, f"non-interactive scene has successors {sorted(targets)}"))
    for (sid, via), targets in labeled.items():
        if len(targets) > 1:
            out.append(_err("AmbiguousSuccessor", sid, f"label {via!r} leads to {sorted(targets)}"))


def _scene_targets(story: Story, scene: Scene) -> list[str]:
    targets: list[str] = []
    if scene.interaction is not None:
        for r in scene.interaction.responses:
            t = resolve_response_target(story, scene.scene_id, r)
            if t is not None:
                targets.append(t)
    else:
        t = resolve_successor(story, scene.scene_id)
        if t is not None:
            targets.append(t)
    return targets


def _check_reachability(story: Story, out: list[Violation]) -> None:
    start = story.start_scene
    if start is None or start not in story.scenes:
        return
    reached: set[str] = set()
    frontier = [start]
    while frontier:
        sid = frontier.pop()
        if sid in reached or sid not in story.scenes:
            continue
        reached.add(sid)
        frontier.extend(_scene_targets(story, story.scenes[sid]))
    for sid in story.scenes:
        if sid not in reached:
            out.append(_warn("UnreachableScene", sid, "no path from the start scene"))

    def is_terminal(scene: Scene) -> bool:
        if scene.interaction is not None:
            return any(
                resolve_response_target(story, scene.scene_id, r) is None
                for r in scene.interaction.responses
            )
        return resolve_successor(story, scene.scene_id) is None

    if not any(is_terminal(story.scenes[sid]) for sid in reached):
        out.append(_warn("NoTerminalReachable", start, "every path from the start loops forever"))


def validate_story(story: Story) -> list[Violation]:
    out: list[Violation] = []
    if story.start_scene is None:
        out.append(_err("MissingStart", "", "story has no start scene"))
    elif story.start_scene not in story.scenes:
        out.append(_err("MissingStart", story.start_scene, "start scene is not in the story"))
    for key, scene in story.scenes.items():
        if key != scene.scene_id:
            out.append(_err("SceneIdMismatch", key, f"keyed {key!r} but scene says {scene.scene_id!r}"))
        _check_scene(story, scene, out)
    _check_edges(story, out)
    for idx, sp in enumerate(story.screenplay):
        subject = f"screenplay[{idx}]"
        if not sp.sceneName.strip():
            out.append(_warn("EmptySceneName", subject, "screenplay scene has no name"))
        cast = set(sp.characters)
        for line in sp.dialogue:
            if line.speaker and line.speaker not in cast:
                out.append(_warn("SpeakerNotInCharacters", subject, f"speaker {line.speaker!r} not in characters"))
    for name, profile in story.voice_profiles.items():
        if name != profile.name:
            out.append(_err("VoiceProfileNameMismatch", name, f"keyed {name!r} but profile says {profile.name!r}"))
        if profile.speed <= 0:
            out.append(_err("NonPositiveSpeed", name, f"speed {profile.speed} must be positive"))
    _check_reachability(story, out)
    return out


def errors_only(violations: list[Violation]) -> list[Violation]:
    return [v for v in violations if v.severity is Severity.ERROR]


def schema_violations(violations: list[Violation]) -> list[Violation]:
    return [v for v in violations if v.code in SCHEMA_CODES]
