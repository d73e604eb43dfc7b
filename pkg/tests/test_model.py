import dataclasses
import random

import pytest
from hypothesis import given, settings, strategies as st

from generators import random_valid_story
from storyloom.model import (
    AssetKind,
    AssetRef,
    Edge,
    ElementKind,
    InteractionSpec,
    Provenance,
    Response,
    Scene,
    SceneElement,
    Story,
    TimelineClip,
    Track,
    VoiceProfile,
    new_story,
    next_clip_id,
    next_element_id,
    next_scene_id,
    register_asset,
    with_scene,
)
from storyloom.serialize import from_plain, to_plain


def test_new_story_ids_are_distinct():
    a, b = new_story("one"), new_story("two")
    assert a.story_id != b.story_id
    assert a.schema_version == 1


def test_new_story_accepts_explicit_id():
    assert new_story("t", story_id="abc").story_id == "abc"


def test_next_scene_id_fills_lowest_gap():
    story = new_story("t")
    story = with_scene(story, Scene(scene_id="s1"))
    story = with_scene(story, Scene(scene_id="s3"))
    assert next_scene_id(story) == "s2"


def test_next_element_and_clip_ids():
    scene = Scene(
        scene_id="s1",
        elements=(SceneElement("e1", ElementKind.SPEECH_BUBBLE, text="hi"),),
        clips=(TimelineClip("c1", "e1", Track.VISUAL, 0.0, 1.0),),
    )
    assert next_element_id(scene) == "e2"
    assert next_clip_id(scene) == "c2"


def test_clip_end_is_start_plus_duration():
    clip = TimelineClip("c1", "e1", Track.VISUAL, 1.5, 2.25)
    assert clip.end_s == pytest.approx(3.75)


def test_with_scene_replaces_existing_scene():
    story = new_story("t")
    story = with_scene(story, Scene(scene_id="s1", title="old"))
    story = with_scene(story, Scene(scene_id="s1", title="new"))
    assert story.scenes["s1"].title == "new"
    assert len(story.scenes) == 1


def test_register_asset_indexes_by_id(store):
    story = new_story("t")
    ref = store.put(b"123", AssetKind.IMAGE, "image/png", Provenance("p", "x"))
    story = register_asset(story, ref)
    assert story.asset_index[ref.asset_id] is ref


# -- plain-data round trips -------------------------------------------------


def test_to_plain_unwraps_enums_and_tuples():
    clip = TimelineClip("c1", "e1", Track.AUDIO, 0.0, 1.0)
    plain = to_plain(clip)
    assert plain["track"] == "audio"
    assert isinstance(plain, dict)
    assert from_plain(TimelineClip, plain) == clip


def test_unknown_keys_survive_a_round_trip():
    plain = to_plain(TimelineClip("c1", "e1", Track.AUDIO, 0.0, 1.0))
    plain["futureKnob"] = {"x": 1}
    clip = from_plain(TimelineClip, plain)
    assert clip.extra == {"futureKnob": {"x": 1}}
    assert to_plain(clip)["futureKnob"] == {"x": 1}


def test_extra_merges_flat_not_nested():
    element = SceneElement("e1", ElementKind.SPEECH_BUBBLE, text="hi", extra={"z": 3})
    plain = to_plain(element)
    assert "extra" not in plain
    assert plain["z"] == 3


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_story_round_trips_through_plain_data(seed):
    story, _ = random_valid_story(random.Random(seed))
    assert from_plain(Story, to_plain(story)) == story


def test_interaction_round_trip():
    spec = InteractionSpec(
        question="Where next?",
        responses=(Response("Forest", next_scene="s2"), Response("Town", next_scene="s3")),
        question_audio="abc",
    )
    assert from_plain(InteractionSpec, to_plain(spec)) == spec


def test_voice_profile_defaults():
    profile = VoiceProfile("narrator", "voice-1")
    assert profile.pitch == 0.0 and profile.speed == 1.0
    assert from_plain(VoiceProfile, to_plain(profile)) == profile


def test_story_dataclasses_are_immutable():
    story = new_story("t")
    with pytest.raises(dataclasses.FrozenInstanceError):
        story.title = "other"


def test_edge_round_trip_keeps_optional_label():
    for edge in (Edge("s1", "s2"), Edge("s1", "s3", "Forest")):
        assert from_plain(Edge, to_plain(edge)) == edge
