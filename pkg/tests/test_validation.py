import random

from hypothesis import given, settings, strategies as st

from generators import (
    oracle_ambiguous_successors,
    oracle_dangling_targets,
    random_valid_story,
)
from storyloom.model import (
    Edge,
    ElementKind,
    InteractionSpec,
    Response,
    Scene,
    SceneElement,
    Story,
    TimelineClip,
    Track,
    VoiceProfile,
    new_story,
    with_scene,
)
from storyloom.validation import (
    DEFERRABLE_CODES,
    SCHEMA_CODES,
    Severity,
    clips_overlap,
    errors_only,
    resolve_response_target,
    resolve_successor,
    schema_violations,
    validate_story,
)


def codes(violations):
    return {v.code for v in violations}


def base_story():
    story = new_story("t", story_id="story1")
    story = with_scene(story, Scene(scene_id="s1", title="one"))
    story = with_scene(story, Scene(scene_id="s2", title="two"))
    return Story(
        story_id=story.story_id,
        title=story.title,
        storyline=story.storyline,
        screenplay=story.screenplay,
        scenes=story.scenes,
        start_scene="s1",
        edges=(Edge("s1", "s2"),),
        voice_profiles=story.voice_profiles,
        asset_index=story.asset_index,
    )


def test_clean_story_passes():
    assert validate_story(base_story()) == []


def test_missing_start_is_an_error():
    story = base_story()
    story = Story(**{**story.__dict__, "start_scene": None})
    assert "MissingStart" in codes(errors_only(validate_story(story)))


def test_dangling_response_target_detected():
    story = base_story()
    scene = story.scenes["s1"]
    spec = InteractionSpec(
        question="where?",
        responses=(Response("Forest", next_scene="s9"), Response("Town", next_scene="s2")),
    )
    scene = Scene(**{**scene.__dict__, "interaction": spec})
    story = with_scene(story, scene)
    story = Story(**{**story.__dict__, "edges": ()})
    found = [v for v in validate_story(story) if v.code == "DanglingBranchTarget"]
    assert len(found) == 1
    assert found[0].severity is Severity.ERROR
    assert found[0].subject == "s9"


def test_two_unlabeled_edges_are_ambiguous():
    story = base_story()
    story = with_scene(story, Scene(scene_id="s3"))
    story = Story(**{**story.__dict__, "edges": (Edge("s1", "s2"), Edge("s1", "s3"))})
    assert "AmbiguousSuccessor" in codes(errors_only(validate_story(story)))


def test_same_label_two_targets_is_ambiguous():
    story = base_story()
    story = with_scene(story, Scene(scene_id="s3"))
    spec = InteractionSpec(
        question="where?",
        responses=(Response("Forest"), Response("Town")),
    )
    story = with_scene(story, Scene(**{**story.scenes["s1"].__dict__, "interaction": spec}))
    story = Story(
        **{
            **story.__dict__,
            "edges": (Edge("s1", "s2", "Forest"), Edge("s1", "s3", "Forest")),
        }
    )
    assert "AmbiguousSuccessor" in codes(errors_only(validate_story(story)))


def test_unreachable_scene_is_deferrable():
    story = base_story()
    story = with_scene(story, Scene(scene_id="s3"))
    story = Story(**{**story.__dict__, "edges": (Edge("s1", "s2"),)})
    out = validate_story(story)
    hit = [v for v in out if v.code == "UnreachableScene"]
    assert hit and all(v.severity is Severity.WARNING for v in hit)
    assert "UnreachableScene" in DEFERRABLE_CODES


def test_cycle_with_no_exit_warns_not_errors():
    story = base_story()
    story = Story(**{**story.__dict__, "edges": (Edge("s1", "s2"), Edge("s2", "s1"))})
    out = validate_story(story)
    assert "NoTerminalReachable" in codes(out)
    assert errors_only(out) == []


def test_reconverging_branches_are_legal():
    story = base_story()
    story = with_scene(story, Scene(scene_id="s3"))
    story = with_scene(story, Scene(scene_id="s4"))
    spec = InteractionSpec(
        question="where?",
        responses=(Response("Forest", next_scene="s2"), Response("Town", next_scene="s3")),
    )
    story = with_scene(story, Scene(**{**story.scenes["s1"].__dict__, "interaction": spec}))
    story = Story(
        **{
            **story.__dict__,
            "edges": (
                Edge("s1", "s2", "Forest"),
                Edge("s1", "s3", "Town"),
                Edge("s2", "s4"),
                Edge("s3", "s4"),
            ),
        }
    )
    assert errors_only(validate_story(story)) == []


def test_bubble_without_text_is_schema_error():
    story = base_story()
    scene = story.scenes["s1"]
    scene = Scene(
        **{
            **scene.__dict__,
            "elements": (SceneElement("e1", ElementKind.SPEECH_BUBBLE),),
        }
    )
    story = with_scene(story, scene)
    out = validate_story(story)
    assert "BubbleMissingText" in codes(out)
    assert "BubbleMissingText" in SCHEMA_CODES
    assert schema_violations(out)


def test_overlapping_clips_flagged():
    story = base_story()
    scene = story.scenes["s1"]
    scene = Scene(
        **{
            **scene.__dict__,
            "elements": (SceneElement("e1", ElementKind.SPEECH_BUBBLE, text="x"),),
            "clips": (
                TimelineClip("c1", "e1", Track.VISUAL, 0.0, 2.0),
                TimelineClip("c2", "e1", Track.VISUAL, 1.0, 2.0),
            ),
        }
    )
    story = with_scene(story, scene)
    assert "ClipOverlap" in codes(validate_story(story))


def test_back_to_back_clips_do_not_overlap():
    assert not clips_overlap(0.0, 2.0, 2.0, 1.0)
    assert clips_overlap(0.0, 2.0, 1.999, 1.0)
    assert not clips_overlap(3.0, 1.0, 0.0, 3.0)


def test_audio_clip_targeting_image_is_kind_mismatch():
    story, store = random_valid_story(random.Random(7), story_id="story1")
    image_id = next(
        ref.asset_id for ref in story.asset_index.values() if ref.kind.value == "image"
    )
    sid = story.start_scene
    scene = story.scenes[sid]
    scene = Scene(
        **{
            **scene.__dict__,
            "clips": (TimelineClip("c99", image_id, Track.AUDIO, 0.0, 1.0),),
        }
    )
    story = with_scene(story, scene)
    assert "ClipTrackKindMismatch" in codes(validate_story(story))


def test_one_response_interaction_flagged():
    story = base_story()
    spec = InteractionSpec(question="where?", responses=(Response("Only", next_scene="s2"),))
    story = with_scene(story, Scene(**{**story.scenes["s1"].__dict__, "interaction": spec}))
    story = Story(**{**story.__dict__, "edges": ()})
    assert "TooFewResponses" in codes(validate_story(story))


def test_duplicate_response_labels_flagged():
    story = base_story()
    spec = InteractionSpec(
        question="where?", responses=(Response("Forest"), Response("Forest"))
    )
    story = with_scene(story, Scene(**{**story.scenes["s1"].__dict__, "interaction": spec}))
    story = Story(**{**story.__dict__, "edges": ()})
    assert "DuplicateResponseLabel" in codes(validate_story(story))


def test_speaker_not_in_characters_is_warning_only():
    from storyloom.model import DialogueLine, ScreenplayScene

    story = base_story()
    story = Story(
        **{
            **story.__dict__,
            "screenplay": (
                ScreenplayScene(
                    sceneName="one",
                    backgroundDescription="a port",
                    narration="...",
                    characters=("Jose",),
                    dialogue=(DialogueLine("Maria", "hi"),),
                ),
            ),
        }
    )
    out = [v for v in validate_story(story) if v.code == "SpeakerNotInCharacters"]
    assert out and out[0].severity is Severity.WARNING


def test_voice_profile_key_mismatch():
    story = base_story()
    story = Story(
        **{**story.__dict__, "voice_profiles": {"a": VoiceProfile("b", "voice-1")}}
    )
    assert "VoiceProfileNameMismatch" in codes(validate_story(story))


def test_resolve_successor_prefers_unlabeled_edge():
    story = base_story()
    assert resolve_successor(story, "s1") == "s2"
    assert resolve_successor(story, "s2") is None


def test_resolve_response_target_prefers_edge_over_field():
    story = base_story()
    spec = InteractionSpec(
        question="q",
        responses=(Response("Forest", next_scene="s1"), Response("Town")),
    )
    story = with_scene(story, Scene(**{**story.scenes["s1"].__dict__, "interaction": spec}))
    story = Story(**{**story.__dict__, "edges": (Edge("s1", "s2", "Forest"),)})
    scene = story.scenes["s1"]
    assert resolve_response_target(story, "s1", scene.interaction.responses[0]) == "s2"
    assert resolve_response_target(story, "s1", scene.interaction.responses[1]) is None


# -- agreement with the naive oracles --------------------------------------


def corrupt_story(rng, story):
    """Randomly break branch wiring in ways editing ops refuse to."""
    sids = list(story.scenes)
    if rng.random() < 0.5 and sids:
        sid = rng.choice(sids)
        scene = story.scenes[sid]
        spec = InteractionSpec(
            question="q",
            responses=(
                Response("a", next_scene=f"ghost{rng.randrange(100)}"),
                Response("b", next_scene=rng.choice(sids)),
            ),
        )
        story = with_scene(story, Scene(**{**scene.__dict__, "interaction": spec}))
        story = Story(
            **{
                **story.__dict__,
                "edges": tuple(e for e in story.edges if e.from_scene != sid),
            }
        )
    if rng.random() < 0.5 and len(sids) >= 2:
        sid = rng.choice(sids)
        scene = story.scenes[sid]
        extra_edges = [
            Edge(sid, t) for t in rng.sample(sids, 2)
        ] if scene.interaction is None else [
            Edge(sid, t, scene.interaction.responses[0].label) for t in rng.sample(sids, 2)
        ]
        story = Story(**{**story.__dict__, "edges": story.edges + tuple(extra_edges)})
    return story


@settings(max_examples=80, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    inject=st.booleans(),
)
def test_validator_agrees_with_naive_oracles(seed, inject):
    rng = random.Random(seed)
    story, _ = random_valid_story(rng)
    if inject:
        story = corrupt_story(rng, story)
    out = validate_story(story)
    dangling = {v.subject for v in out if v.code == "DanglingBranchTarget"}
    assert dangling == oracle_dangling_targets(story)
    ambiguous = {v.subject for v in out if v.code == "AmbiguousSuccessor"}
    assert ambiguous == oracle_ambiguous_successors(story)


def test_errors_only_filters_severity():
    story = base_story()
    story = with_scene(story, Scene(scene_id="s3"))
    out = validate_story(story)
    assert all(v.severity is Severity.ERROR for v in errors_only(out))
    assert len(errors_only(out)) < len(out)
