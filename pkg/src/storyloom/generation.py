"""Generation requests and the operations that run them against providers.

Requests are validated before any provider is touched, so a bad range
never spends provider quota.  Every produced asset records full
provenance: provider name, prompts, parameters, and the seed actually
used (drawn from ``rng`` when the request leaves it unset, then recorded
so the result is reproducible).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Callable

from .assets import AssetStore
from .errors import EmptyMask, EmptyPrompt, EmptyText, ProviderError, RangeError, SafetyBlocked
from .model import AssetKind, AssetRef, Provenance, VoiceProfile
from .prompts import REFINE_SYSTEM_PROMPT
from .providers.base import (
    AudioProvider,
    ChatMessage,
    ImageProvider,
    SegmentationProvider,
    SpeechProvider,
    TextProvider,
)
from .safety import SafetyPolicy

MAX_SAMPLES = 4
MAX_DENOISE_STEPS = 150
MIN_AUDIO_SECONDS = 1.0
MAX_AUDIO_SECONDS = 10.0

Clock = Callable[[], str]


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class AudioKind(str, Enum):
    SOUND_EFFECT = "sound_effect"
    MUSIC = "music"


@dataclass(frozen=True)
class ImageRequest:
    prompt: str
    negative_prompt: str = ""
    samples: int = 1
    denoise_steps: int = 30
    panorama: bool = False
    self_attention: bool = False
    seed: int | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AudioRequest:
    kind: AudioKind
    prompt: str
    duration_s: float = 5.0
    top_p: float = 0.9
    guidance_scale: float = 3.0
    seed: int | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SpeechRequest:
    text: str
    profile: VoiceProfile = field(default_factory=lambda: VoiceProfile("default", "default"))
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SegmentHint:
    """Normalized click point, or a box when width and height are set."""

    x: float
    y: float
    width: float | None = None
    height: float | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SegmentationRequest:
    image_asset: str
    hint: SegmentHint
    extra: dict = field(default_factory=dict)


GenerationRequest = ImageRequest | AudioRequest | SpeechRequest | SegmentationRequest


def validate_request(request: GenerationRequest) -> None:
    """Raise RangeError/EmptyPrompt/EmptyText for out-of-contract fields."""
    if isinstance(request, ImageRequest):
        if not request.prompt.strip():
            raise EmptyPrompt("image prompt is empty")
        if not 1 <= request.samples <= MAX_SAMPLES:
            raise RangeError(
                f"samples {request.samples} outside [1, {MAX_SAMPLES}]",
                field="samples", value=request.samples, low=1, high=MAX_SAMPLES,
            )
        if not 1 <= request.denoise_steps <= MAX_DENOISE_STEPS:
            raise RangeError(
                f"denoise_steps {request.denoise_steps} outside [1, {MAX_DENOISE_STEPS}]",
                field="denoise_steps", value=request.denoise_steps, low=1, high=MAX_DENOISE_STEPS,
            )
    elif isinstance(request, AudioRequest):
        if not request.prompt.strip():
            raise EmptyPrompt("audio prompt is empty")
        if not MIN_AUDIO_SECONDS <= request.duration_s <= MAX_AUDIO_SECONDS:
            raise RangeError(
                f"duration_s {request.duration_s} outside [{MIN_AUDIO_SECONDS}, {MAX_AUDIO_SECONDS}]",
                field="duration_s", value=request.duration_s,
                low=MIN_AUDIO_SECONDS, high=MAX_AUDIO_SECONDS,
            )
        if not 0 < request.top_p <= 1:
            raise RangeError(
                f"top_p {request.top_p} outside (0, 1]",
                field="top_p", value=request.top_p, low=0, high=1,
            )
        if request.guidance_scale <= 0:
            raise RangeError(
                f"guidance_scale {request.guidance_scale} must be positive",
                field="guidance_scale", value=request.guidance_scale,
            )
    elif isinstance(request, SpeechRequest):
        if not request.text.strip():
            raise EmptyText("speech text is empty")
        if request.profile.speed <= 0:
            raise RangeError(
                f"speed {request.profile.speed} must be positive",
                field="speed", value=request.profile.speed,
            )
    elif isinstance(request, SegmentationRequest):
        hint = request.hint
        if (hint.width is None) != (hint.height is None):
            raise RangeError("hint needs both width and height, or neither", field="hint")
        if hint.width is not None and (hint.width <= 0 or hint.height <= 0):
            raise RangeError(
                f"hint box {hint.width}x{hint.height} must be positive",
                field="hint", value=[hint.width, hint.height],
            )
    else:
        raise TypeError(f"not a generation request: {request!r}")


def _provider_name(provider: object) -> str:
    return getattr(provider, "name", type(provider).__name__)


def _call(provider_label: str, fn, *args):
    try:
        return fn(*args)
    except ProviderError:
        raise
    except Exception as exc:
        raise ProviderError(f"{provider_label} provider failed: {exc}", cause=repr(exc)) from exc


def _screen(policy: SafetyPolicy | None, text: str) -> dict:
    """Run the prompt past the safety policy; returns provenance params."""
    if policy is None:
        return {}
    verdict = policy.check_text(text)
    if not verdict.allowed:
        raise SafetyBlocked(
            f"prompt refused: {', '.join(verdict.categories)}",
            categories=list(verdict.categories),
        )
    if verdict.trigger_warning:
        return {"trigger_warning": True, "categories": list(verdict.categories)}
    return {}


def generate_images(
    request: ImageRequest,
    provider: ImageProvider,
    store: AssetStore,
    *,
    policy: SafetyPolicy | None = None,
    rng: random.Random | None = None,
    clock: Clock = now_iso,
) -> list[AssetRef]:
    validate_request(request)
    safety_params = _screen(policy, request.prompt)
    if request.seed is None:
        request = replace(request, seed=(rng or random).randrange(2**31))
    images = _call("image", provider.generate, request)
    if len(images) != request.samples:
        raise ProviderError(
            f"image provider returned {len(images)} samples, wanted {request.samples}"
        )
    refs = []
    created = clock()
    for i, data in enumerate(images):
        refs.append(
            store.put(
                data,
                AssetKind.IMAGE,
                "image/png",
                Provenance(
                    provider_name=_provider_name(provider),
                    prompt=request.prompt,
                    negative_prompt=request.negative_prompt,
                    params={
                        "denoise_steps": request.denoise_steps,
                        "panorama": request.panorama,
                        "self_attention": request.self_attention,
                        "sample_index": i,
                        **safety_params,
                    },
                    seed=request.seed,
                    created_at=created,
                ),
            )
        )
    return refs


def generate_audio(
    request: AudioRequest,
    provider: AudioProvider,
    store: AssetStore,
    *,
    policy: SafetyPolicy | None = None,
    rng: random.Random | None = None,
    clock: Clock = now_iso,
) -> AssetRef:
    validate_request(request)
    safety_params = _screen(policy, request.prompt)
    if request.seed is None:
        request = replace(request, seed=(rng or random).randrange(2**31))
    data = _call("audio", provider.generate, request)
    kind = AssetKind.MUSIC if request.kind is AudioKind.MUSIC else AssetKind.AUDIO_EFFECT
    return store.put(
        data,
        kind,
        "audio/wav",
        Provenance(
            provider_name=_provider_name(provider),
            prompt=request.prompt,
            params={
                "kind": request.kind.value,
                "duration_s": request.duration_s,
                "top_p": request.top_p,
                "guidance_scale": request.guidance_scale,
                **safety_params,
            },
            seed=request.seed,
            created_at=clock(),
        ),
    )


def synthesize_speech(
    request: SpeechRequest,
    provider: SpeechProvider,
    store: AssetStore,
    *,
    policy: SafetyPolicy | None = None,
    clock: Clock = now_iso,
) -> AssetRef:
    validate_request(request)
    safety_params = _screen(policy, request.text)
    data = _call("speech", provider.synthesize, request)
    profile = request.profile
    return store.put(
        data,
        AssetKind.SPEECH,
        "audio/wav",
        Provenance(
            provider_name=_provider_name(provider),
            prompt=request.text,
            params={
                "voice": profile.voice_id,
                "pitch": profile.pitch,
                "speed": profile.speed,
                **safety_params,
            },
            created_at=clock(),
        ),
    )


def segment_character(
    request: SegmentationRequest,
    provider: SegmentationProvider,
    store: AssetStore,
    *,
    clock: Clock = now_iso,
) -> AssetRef:
    validate_request(request)
    source = store.get_ref(request.image_asset)
    image = store.get_bytes(request.image_asset)
    cutout, box = _call("segmentation", provider.segment, image, request.hint)
    if not cutout or box[2] <= 0 or box[3] <= 0:
        raise EmptyMask(
            "hint selects no pixels", asset_id=request.image_asset, box=list(box)
        )
    hint = request.hint
    hint_rec = {"x": hint.x, "y": hint.y}
    if hint.width is not None:
        hint_rec.update(width=hint.width, height=hint.height)
    return store.put(
        cutout,
        AssetKind.CHARACTER_CUTOUT,
        "image/png",
        Provenance(
            provider_name=_provider_name(provider),
            prompt=source.provenance.prompt or "character cutout",
            params={"source": request.image_asset, "mask_box": list(box), "hint": hint_rec},
            created_at=clock(),
        ),
    )


def refine_prompt(initial: str, provider: TextProvider) -> str:
    """Expand a terse prompt into a vivid one via the prompt-writing model."""
    if not initial.strip():
        raise EmptyPrompt("nothing to refine")
    reply = _call(
        "text",
        provider.chat,
        [ChatMessage("system", REFINE_SYSTEM_PROMPT), ChatMessage("user", initial)],
    )
    return reply.strip()


CURATED_PROMPTS = (
    "watercolor fox trotting through a misty forest",
    "paper-cutout pirate ship on layered waves",
    "pelican sitting down, studio ghibli style",
    "chalk drawing of a rocket over a sleeping town",
    "low-poly desert with a single neon cactus",
    "storybook lighthouse under swirling stars",
    "felt puppet dragon guarding marshmallow treasure",
    "isometric treehouse village at golden hour",
)


class ExampleLibrary:
    """Curated prompt/asset pairs shown as inspiration in pickers.

    Assets are generated once through the configured image provider on
    first use and then served from the store.
    """

    def __init__(self, provider: ImageProvider, store: AssetStore, *, clock: Clock = now_iso):
        self._provider = provider
        self._store = store
        self._clock = clock
        self._entries: list[tuple[str, str]] | None = None

    def _seed_entries(self) -> list[tuple[str, str]]:
        entries = []
        for i, prompt in enumerate(CURATED_PROMPTS):
            ref = generate_images(
                ImageRequest(prompt=prompt, seed=1000 + i),
                self._provider,
                self._store,
                clock=self._clock,
            )[0]
            entries.append((prompt, ref.asset_id))
        return entries

    def query(self, text: str = "") -> list[tuple[str, str]]:
        if self._entries is None:
            self._entries = self._seed_entries()
        needle = text.strip().lower()
        if not needle:
            return list(self._entries)
        return [(p, a) for p, a in self._entries if needle in p.lower()]
