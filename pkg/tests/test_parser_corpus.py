"""Fixture corpus for the tolerant screenplay parser.

Each fixture is a verbatim chat-model reply style observed in the wild:
strict JSON, single-quoted pseudo-JSON, commentary-wrapped, code-fenced,
truncated mid-scene, missing or unknown fields, or outright non-answers.
Expected scene counts and repair notes are frozen per fixture; the fuzz
tests then assert the parser never raises on arbitrary input.
"""

import json
import random
import string
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from storyloom.screenplay import ParseReport, parse_screenplay, screenplay_to_json

FIXTURES = Path(__file__).parent / "fixtures" / "screenplays"

# name -> (scene names, exact repair notes, rejected)
EXPECTED = {
    "strict_two_scenes.json": (["A Bustling Port", "The Lighthouse"], [], False),
    "strict_escaped_quotes.json": (["Echoes"], [], False),
    "single_quoted.txt": (["Morning Catch"], ["normalized single-quoted strings"], False),
    "commentary_wrapped.txt": (["Setting Sail"], ["trimmed surrounding commentary"], False),
    "commentary_single_quoted.txt": (
        ["A Bustling Port"],
        ["trimmed surrounding commentary", "normalized single-quoted strings"],
        False,
    ),
    "code_fenced.txt": (["The Gate"], ["trimmed surrounding commentary"], False),
    "truncated_tail.txt": (
        ["Departure", "The Tunnel"],
        ["recovered complete scenes from a truncated list"],
        False,
    ),
    "truncated_single_quoted.txt": (
        ["First Light"],
        ["normalized single-quoted strings", "recovered complete scenes from a truncated list"],
        False,
    ),
    "missing_fields.json": (
        ["Found Map", "Old Cellar"],
        [
            "scene 1: missing field 'backgroundDescription' defaulted",
            "scene 2: missing field 'dialogue' defaulted",
            "scene 3: dropped (missing sceneName)",
        ],
        False,
    ),
    "unknown_fields.json": (
        ["Rooftop"],
        ["scene 1: unknown field 'mood' ignored", "scene 1: unknown field 'cameraAngle' ignored"],
        False,
    ),
    "single_object.json": (["Solo"], ["wrapped single scene object in a list"], False),
    "trailing_commas.txt": (
        ["Market Day"],
        ["normalized single-quoted strings", "removed trailing commas"],
        False,
    ),
    "python_literals.txt": (
        ["Night Watch"],
        [
            "normalized single-quoted strings",
            "converted Python literals",
            "scene 1: unknown field 'interactive' ignored",
            "scene 1: unknown field 'props' ignored",
        ],
        False,
    ),
    "empty.txt": ([], ["input is empty"], True),
    "whitespace_only.txt": ([], ["input is empty"], True),
    "prose_only.txt": ([], ["no JSON structure found"], True),
    "wrong_shape.json": ([], ["top-level JSON is not a list of scenes"], True),
    "names_only.json": (
        ["One", "Two"],
        [
            "scene 1: missing field 'characters' defaulted",
            "scene 1: missing field 'dialogue' defaulted",
            "scene 1: missing field 'backgroundDescription' defaulted",
            "scene 1: missing field 'narration' defaulted",
            "scene 2: missing field 'characters' defaulted",
            "scene 2: missing field 'dialogue' defaulted",
            "scene 2: missing field 'backgroundDescription' defaulted",
            "scene 2: missing field 'narration' defaulted",
        ],
        False,
    ),
    "mixed_garbage.txt": (
        ["Kept"],
        ["scene 2: dropped (not an object)", "scene 3: dropped (missing sceneName)"],
        False,
    ),
    "control_chars.txt": (
        ["Breaks"],
        ["normalized single-quoted strings", "escaped raw control characters in strings"],
        False,
    ),
    "nested_double_in_single.txt": (["Quoted"], ["normalized single-quoted strings"], False),
}


def test_corpus_covers_every_fixture_file():
    names = {p.name for p in FIXTURES.iterdir()}
    assert names == set(EXPECTED)
    assert len(names) >= 12


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_fixture(name):
    raw = (FIXTURES / name).read_text(encoding="utf-8")
    report = parse_screenplay(raw)
    scene_names, repairs, rejected = EXPECTED[name]
    assert [s.sceneName for s in report.scenes] == scene_names
    assert list(report.repairs) == repairs
    assert report.rejected is rejected


def test_apostrophes_survive_quote_normalization():
    report = parse_screenplay((FIXTURES / "single_quoted.txt").read_text())
    assert report.scenes[0].narration == "Let's begin at the docks."
    assert report.scenes[0].dialogue[0].speech == "Time to fish!"


def test_inner_double_quotes_survive():
    report = parse_screenplay((FIXTURES / "nested_double_in_single.txt").read_text())
    assert report.scenes[0].narration == 'He whispered "quiet please" to the room.'


def test_raw_newline_becomes_escaped_newline():
    report = parse_screenplay((FIXTURES / "control_chars.txt").read_text())
    assert report.scenes[0].narration == "First line\nsecond line"


def test_rejected_iff_no_scenes():
    for name in EXPECTED:
        report = parse_screenplay((FIXTURES / name).read_text(encoding="utf-8"))
        assert report.rejected == (len(report.scenes) == 0)


def test_round_trip_is_lossless():
    for name in EXPECTED:
        report = parse_screenplay((FIXTURES / name).read_text(encoding="utf-8"))
        if report.rejected:
            continue
        again = parse_screenplay(screenplay_to_json(report.scenes))
        assert again.scenes == report.scenes
        assert again.repairs == ()


# -- fuzzing ----------------------------------------------------------------

_CHARS = string.ascii_letters + string.digits + "{}[]'\",:\\ \n\r\t.!?-_" + "é—世"


def test_seeded_fuzz_never_raises():
    """10^5 random strings over a JSON-ish alphabet; parse must always
    return a report, never raise."""
    rng = random.Random(20240803)
    for _ in range(100_000):
        n = rng.randrange(0, 60)
        raw = "".join(rng.choice(_CHARS) for _ in range(n))
        report = parse_screenplay(raw)
        assert isinstance(report, ParseReport)
        assert report.rejected == (len(report.scenes) == 0)


@settings(max_examples=400, deadline=None)
@given(raw=st.text(max_size=200))
def test_hypothesis_fuzz_never_raises(raw):
    report = parse_screenplay(raw)
    assert isinstance(report, ParseReport)


@settings(max_examples=200, deadline=None)
@given(
    payload=st.recursive(
        st.none() | st.booleans() | st.integers() | st.floats(allow_nan=False) | st.text(max_size=20),
        lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=8), inner, max_size=4),
        max_leaves=20,
    )
)
def test_arbitrary_json_never_raises(payload):
    report = parse_screenplay(json.dumps(payload, ensure_ascii=False))
    assert isinstance(report, ParseReport)
