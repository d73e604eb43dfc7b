"""Storyboard graph operations.

Scenes are nodes; edges carry a response label exactly when their source
scene ends in an interaction.  Cycles and reconverging branches are
legitimate story shapes and never rejected.  All operations are pure:
they return a new Story and leave the input untouched, so a failed call
has no partial effect.
"""

from __future__ import annotations

import random
from dataclasses import replace
from typing import Sequence

from .assets import AssetStore
from .errors import (
    AmbiguousSuccessor,
    DuplicateEdge,
    EdgeLabelWithoutInteraction,
    MissingResponseLabel,
    ProviderError,
    RemovingStartScene,
    SafetyBlocked,
    UnknownScene,
)
from .generation import Clock, ImageRequest, generate_images, now_iso
from .model import (
    Edge,
    Response,
    Scene,
    ScreenplayScene,
    Story,
    next_scene_id,
    register_asset,
    with_scene,
)
from .prompts import monochrome_background_prompt
from .providers.base import ImageProvider
from .validation import response_labels


def populate_from_screenplay(
    story: Story,
    scenes: Sequence[ScreenplayScene],
    image_provider: ImageProvider | None = None,
    store: AssetStore | None = None,
    *,
    rng: random.Random | None = None,
    clock: Clock = now_iso,
) -> tuple[Story, tuple[str, ...]]:
    """Build a fresh linear storyboard from a compiled screenplay.

    Replaces any existing board.  Each scene gets a placeholder
    monochromatic background when an image provider is available; a
    provider failure skips that background and is reported as a warning,
    never as an error.
    """
    warnings: list[str] = []
    out = replace(story, screenplay=tuple(scenes), scenes={}, edges=(), start_scene=None)
    previous: str | None = None
    for sp in scenes:
        sid = next_scene_id(out)
        scene = Scene(
            scene_id=sid,
            title=sp.sceneName,
            background_description=sp.backgroundDescription,
        )
        if image_provider is not None and store is not None:
            description = sp.backgroundDescription.strip() or sp.sceneName
            try:
                ref = generate_images(
                    ImageRequest(prompt=monochrome_background_prompt(description), samples=1),
                    image_provider,
                    store,
                    rng=rng,
                    clock=clock,
                )[0]
            except (ProviderError, SafetyBlocked) as exc:
                warnings.append(f"{sid}: background generation failed: {exc.message}")
            else:
                out = register_asset(out, ref)
                scene = replace(scene, background=ref.asset_id)
        out = with_scene(out, scene)
        if previous is None:
            out = replace(out, start_scene=sid)
        else:
            out = replace(out, edges=out.edges + (Edge(previous, sid),))
        previous = sid
    return out, tuple(warnings)


def add_scene(
    story: Story, title: str = "", background_description: str = ""
) -> tuple[Story, str]:
    sid = next_scene_id(story)
    scene = Scene(scene_id=sid, title=title, background_description=background_description)
    return with_scene(story, scene), sid


def remove_scene(story: Story, scene_id: str) -> tuple[Story, tuple[str, ...]]:
    """Delete a scene; incident edges and branch references go with it."""
    if scene_id not in story.scenes:
        raise UnknownScene(f"no scene {scene_id!r}", scene_id=scene_id)
    if scene_id == story.start_scene:
        raise RemovingStartScene("reassign the start scene first", scene_id=scene_id)
    warnings: list[str] = []
    scenes = {k: v for k, v in story.scenes.items() if k != scene_id}
    edges = []
    for edge in story.edges:
        if edge.from_scene == scene_id or edge.to_scene == scene_id:
            warnings.append(f"removed edge {edge.from_scene}->{edge.to_scene}")
        else:
            edges.append(edge)
    for sid, scene in list(scenes.items()):
        if scene.interaction is None:
            continue
        changed = False
        responses = []
        for r in scene.interaction.responses:
            if r.next_scene == scene_id:
                warnings.append(f"{sid}: response {r.label!r} no longer leads anywhere")
                responses.append(replace(r, next_scene=None))
                changed = True
            else:
                responses.append(r)
        if changed:
            scenes[sid] = replace(
                scene, interaction=replace(scene.interaction, responses=tuple(responses))
            )
    return replace(story, scenes=scenes, edges=tuple(edges)), tuple(warnings)


def duplicate_scene(story: Story, scene_id: str) -> tuple[Story, str]:
    """Copy of the scene under a fresh id, unlinked; asset refs are shared."""
    source = story.scenes.get(scene_id)
    if source is None:
        raise UnknownScene(f"no scene {scene_id!r}", scene_id=scene_id)
    new_id = next_scene_id(story)
    return with_scene(story, replace(source, scene_id=new_id)), new_id


def link_scenes(story: Story, from_id: str, to_id: str, via: str | None = None) -> Story:
    """Add an edge; for an interactive source, ``via`` names the response
    taken and the response's own target record is kept in sync."""
    src = story.scenes.get(from_id)
    if src is None:
        raise UnknownScene(f"no scene {from_id!r}", scene_id=from_id)
    if to_id not in story.scenes:
        raise UnknownScene(f"no scene {to_id!r}", scene_id=to_id)
    for edge in story.edges:
        if (edge.from_scene, edge.to_scene, edge.via) == (from_id, to_id, via):
            raise DuplicateEdge(f"{from_id}->{to_id} via {via!r} already linked")
    if src.interaction is None:
        if via is not None:
            raise EdgeLabelWithoutInteraction(
                f"{from_id} has no interaction", scene_id=from_id, via=via
            )
        existing = [e for e in story.edges if e.from_scene == from_id and e.via is None]
        if existing:
            raise AmbiguousSuccessor(
                f"{from_id} already continues to {existing[0].to_scene}",
                scene_id=from_id,
            )
        return replace(story, edges=story.edges + (Edge(from_id, to_id),))
    if via is None:
        raise MissingResponseLabel(
            f"{from_id} ends in an interaction; pick a response label", scene_id=from_id
        )
    labels = response_labels(src.interaction)
    if via not in labels:
        raise MissingResponseLabel(
            f"{from_id} has no response {via!r}", scene_id=from_id, via=via, labels=labels
        )
    for edge in story.edges:
        if edge.from_scene == from_id and edge.via == via:
            raise AmbiguousSuccessor(
                f"response {via!r} already leads to {edge.to_scene}; unlink it first",
                scene_id=from_id,
                via=via,
            )
    responses = tuple(
        replace(r, next_scene=to_id) if r.label == via else r
        for r in src.interaction.responses
    )
    out = with_scene(story, replace(src, interaction=replace(src.interaction, responses=responses)))
    return replace(out, edges=out.edges + (Edge(from_id, to_id, via),))


def unlink_scenes(story: Story, from_id: str, to_id: str, via: str | None = None) -> Story:
    """Drop edges matching (from, to) and, if given, the label; response
    target records pointing along a dropped labeled edge are cleared."""
    edges = []
    dropped_vias: set[str] = set()
    for edge in story.edges:
        if edge.from_scene == from_id and edge.to_scene == to_id and (via is None or edge.via == via):
            if edge.via is not None:
                dropped_vias.add(edge.via)
            continue
        edges.append(edge)
    out = replace(story, edges=tuple(edges))
    src = out.scenes.get(from_id)
    if src is not None and src.interaction is not None and dropped_vias:
        responses = tuple(
            replace(r, next_scene=None)
            if r.label in dropped_vias and r.next_scene == to_id
            else r
            for r in src.interaction.responses
        )
        out = with_scene(out, replace(src, interaction=replace(src.interaction, responses=responses)))
    return out


def set_start(story: Story, scene_id: str) -> Story:
    if scene_id not in story.scenes:
        raise UnknownScene(f"no scene {scene_id!r}", scene_id=scene_id)
    return replace(story, start_scene=scene_id)


def set_scene_interaction(story: Story, scene_id: str, spec) -> tuple[Story, tuple[str, ...]]:
    """Install (or clear) a scene's end-of-scene interaction story-wide.

    Outgoing edges whose label no longer matches a response are dropped,
    and an unlabeled successor edge is dropped when a scene becomes
    interactive, so the graph never ends up half-labeled.
    """
    from .timeline import set_interaction

    scene = story.scenes.get(scene_id)
    if scene is None:
        raise UnknownScene(f"no scene {scene_id!r}", scene_id=scene_id)
    if spec is not None:
        for r in spec.responses:
            if r.next_scene is not None and r.next_scene not in story.scenes:
                raise UnknownScene(
                    f"response {r.label!r} targets missing scene {r.next_scene!r}",
                    scene_id=r.next_scene,
                )
    updated = set_interaction(scene, spec)
    warnings: list[str] = []
    labels = set(response_labels(spec)) if spec is not None else set()
    edges = []
    for edge in story.edges:
        if edge.from_scene != scene_id:
            edges.append(edge)
            continue
        if spec is None and edge.via is not None:
            warnings.append(f"dropped branch {edge.via!r} -> {edge.to_scene}")
        elif spec is not None and edge.via is None:
            warnings.append(f"dropped linear successor {edge.to_scene}")
        elif spec is not None and edge.via not in labels:
            warnings.append(f"dropped branch {edge.via!r} -> {edge.to_scene}")
        else:
            edges.append(edge)
    if spec is not None:
        # carry over targets recorded on the surviving labeled edges
        by_label = {e.via: e.to_scene for e in edges if e.from_scene == scene_id and e.via}
        responses = tuple(
            replace(r, next_scene=by_label.get(r.label, r.next_scene))
            for r in updated.interaction.responses
        )
        updated = replace(updated, interaction=replace(updated.interaction, responses=responses))
    return with_scene(replace(story, edges=tuple(edges)), updated), tuple(warnings)
