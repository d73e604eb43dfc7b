"""End-to-end walkthrough: storyline -> screenplay -> branching storyboard
-> sound effect -> both playback branches -> saved package.

Runs entirely offline against the deterministic mock providers; the
trace and the saved package come out identical on every run.

    python3 scripts/demo_story.py [--out DIR]
"""

from __future__ import annotations

import argparse
import random
import tempfile

from storyloom.assets import AssetStore
from storyloom.generation import AudioKind, AudioRequest, generate_audio
from storyloom.model import (
    ElementKind,
    InteractionSpec,
    Response,
    SceneElement,
    TimelineClip,
    Track,
    new_story,
    register_asset,
    with_scene,
)
from storyloom.persistence import PackageStore, story_to_document
from storyloom.playback import run_story, trace_lines
from storyloom.providers.mock import mock_provider_set
from storyloom.screenplay import compile_screenplay
from storyloom.storyboard import link_scenes, populate_from_screenplay, set_scene_interaction
from storyloom.timeline import upsert_clip, upsert_element

STORYLINE = (
    "Mira finds a paper boat on the riverbank. "
    "Her friend Tomas dares her to follow it downstream. "
    "The boat slips under the old mill and the two race after it."
)

CLOCK = lambda: "2024-06-01T00:00:00+00:00"  # frozen so reruns are byte-identical


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=None, help="package store directory (default: temp dir)")
    args = ap.parse_args()
    out = args.out or tempfile.mkdtemp(prefix="storyloom-demo-")

    providers = mock_provider_set()
    assets = AssetStore()
    rng = random.Random(7)

    # 1. storyline -> screenplay, through the tolerant parser
    report = compile_screenplay(STORYLINE, providers.text)
    print(f"compiled {len(report.scenes)} scenes; parser repairs: {list(report.repairs)}")

    # 2. screenplay -> linear storyboard with placeholder backgrounds
    story = new_story(title="The Paper Boat", story_id="paper-boat")
    story, warnings = populate_from_screenplay(
        story, report.scenes, providers.image, assets, rng=rng, clock=CLOCK
    )
    assert not warnings, warnings
    order = list(story.scenes)  # s1, s2, s3 in creation order
    s1, s2, s3 = order
    print(f"storyboard: start={story.start_scene}, edges={[(e.from_scene, e.to_scene) for e in story.edges]}")

    # 3. give each scene a narration bubble so playback has something to show
    for sid, sp in zip(order, report.scenes):
        scene = story.scenes[sid]
        scene = upsert_element(
            scene,
            SceneElement(element_id="nar", kind=ElementKind.SPEECH_BUBBLE, text=sp.narration),
        )
        scene = upsert_clip(
            scene,
            TimelineClip(clip_id="nc", target="nar", track=Track.VISUAL, start_s=0.0, duration_s=1.5),
            known_assets=set(),
        )
        story = with_scene(story, scene)

    # 4. a river sound effect under the first scene
    ref = generate_audio(
        AudioRequest(kind=AudioKind.SOUND_EFFECT, prompt="river current lapping", duration_s=1.5),
        providers.audio,
        assets,
        rng=rng,
        clock=CLOCK,
    )
    story = register_asset(story, ref)
    scene = upsert_clip(
        story.scenes[s1],
        TimelineClip(clip_id="fx", target=ref.asset_id, track=Track.AUDIO, start_s=0.0, duration_s=1.5),
        known_assets=set(story.asset_index),
    )
    story = with_scene(story, scene)
    print(f"sound effect {ref.asset_id[:12]}... on {s1}")

    # 5. fork after the first scene; branches reconverge at the mill (s3)
    spec = InteractionSpec(
        question="Does Mira follow the boat?",
        responses=(Response(label="Follow it"), Response(label="Cut through town")),
    )
    story, dropped = set_scene_interaction(story, s1, spec)
    print(f"made {s1} interactive; dropped: {list(dropped)}")
    story = link_scenes(story, s1, s2, via="Follow it")
    story = link_scenes(story, s1, s3, via="Cut through town")

    # 6. play out both branches
    for label in ("Follow it", "Cut through town"):
        state, events = run_story(story, responses=[label], dt=0.25)
        path = [sid for sid, _ in state.history]
        print(f"\n--- branch {label!r}: {' -> '.join(path)} ({len(events)} events)")
        for line in trace_lines(events):
            print(line)

    # 7. save, reload, prove the round trip is exact
    store = PackageStore(out)
    package_id = store.save(story, assets)
    reloaded = store.load(package_id, AssetStore())
    assert story_to_document(reloaded) == story_to_document(story)
    print(f"\nsaved package {package_id!r} -> {store.package_path(package_id)}")


if __name__ == "__main__":
    main()
