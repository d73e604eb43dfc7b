import pytest
from hypothesis import given, settings, strategies as st

from storyloom.errors import SafetyBlocked
from storyloom.generation import AudioKind, AudioRequest, ImageRequest, generate_audio, generate_images
from storyloom.providers.mock import MockAudioProvider, MockImageProvider
from storyloom.safety import SafetyPolicy, SafetyVerdict, check_safety


def test_benign_text_passes_clean():
    verdict = check_safety("a pelican on a sunny pier")
    assert verdict == SafetyVerdict(True)


def test_warn_term_flags_without_blocking():
    verdict = check_safety("a scary ghost in the attic")
    assert verdict.allowed
    assert verdict.trigger_warning
    assert set(verdict.categories) == {"horror"}


def test_deny_term_blocks():
    verdict = check_safety("a scene full of gore")
    assert not verdict.allowed
    assert verdict.categories == ("graphic_violence",)


def test_word_boundaries_respected():
    # "snakeskin" contains "snake" but is not the word "snake"
    assert check_safety("a snakeskin pattern wallpaper").trigger_warning is False
    assert check_safety("a snake in the grass").trigger_warning is True


def test_matching_is_case_insensitive():
    assert not check_safety("GORE everywhere").allowed
    assert check_safety("The STORM rolls in").trigger_warning


def test_categories_deduplicated_and_ordered():
    verdict = check_safety("blood on a weapon after the fight")
    assert verdict.categories == ("violence",)


def test_custom_policy_overrides_defaults():
    policy = SafetyPolicy(warn_terms={"broccoli": "vegetables"}, deny_terms={})
    assert policy.check_text("a broccoli forest").trigger_warning
    assert policy.check_text("gore").allowed  # defaults replaced, not merged


def test_blocked_prompt_never_reaches_provider(store):
    provider = MockImageProvider()
    with pytest.raises(SafetyBlocked) as exc:
        generate_images(
            ImageRequest(prompt="knights and gore"), provider, store, policy=SafetyPolicy()
        )
    assert provider.calls == []
    assert exc.value.detail["categories"] == ["graphic_violence"]


def test_warned_prompt_generates_with_flag_in_provenance(store):
    refs = generate_images(
        ImageRequest(prompt="a scary ghost", seed=1),
        MockImageProvider(),
        store,
        policy=SafetyPolicy(),
    )
    params = refs[0].provenance.params
    assert params["trigger_warning"] is True
    assert params["categories"] == ["horror"]


def test_clean_prompt_has_no_safety_params(store):
    refs = generate_images(
        ImageRequest(prompt="a pelican", seed=1), MockImageProvider(), store, policy=SafetyPolicy()
    )
    assert "trigger_warning" not in refs[0].provenance.params


def test_audio_prompts_screened_too(store):
    with pytest.raises(SafetyBlocked):
        generate_audio(
            AudioRequest(AudioKind.SOUND_EFFECT, "sounds of torture"),
            MockAudioProvider(),
            store,
            policy=SafetyPolicy(),
        )


@settings(max_examples=200, deadline=None)
@given(text=st.text(max_size=80))
def test_verdict_is_total_and_consistent(text):
    verdict = check_safety(text)
    # blocked implies categories; warning implies allowed with categories
    if not verdict.allowed:
        assert verdict.categories
        assert not verdict.trigger_warning
    if verdict.trigger_warning:
        assert verdict.allowed
        assert verdict.categories
