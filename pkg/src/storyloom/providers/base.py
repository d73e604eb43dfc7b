"""Provider contracts.

A provider turns one request into raw media bytes (or text) and knows
nothing about stories, stores, or job queues.  Anything a provider raises
is wrapped into ``ProviderError`` by the generation layer; providers may
also raise it themselves for structured failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol, Sequence, runtime_checkable

if TYPE_CHECKING:
    from ..generation import AudioRequest, ImageRequest, SegmentHint, SpeechRequest


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str


@runtime_checkable
class TextProvider(Protocol):
    def chat(self, messages: Sequence[ChatMessage]) -> str: ...


@runtime_checkable
class ImageProvider(Protocol):
    def generate(self, request: "ImageRequest") -> list[bytes]: ...


@runtime_checkable
class AudioProvider(Protocol):
    def generate(self, request: "AudioRequest") -> bytes: ...


@runtime_checkable
class SpeechProvider(Protocol):
    def synthesize(self, request: "SpeechRequest") -> bytes: ...


@runtime_checkable
class SegmentationProvider(Protocol):
    def segment(
        self, image: bytes, hint: "SegmentHint"
    ) -> tuple[bytes, tuple[int, int, int, int]]:
        """Return (cutout bytes, pixel mask box); empty box means no pixels."""
        ...


@dataclass
class ProviderSet:
    """The five provider slots the engine draws on; any may be None when a
    deployment does not offer that capability."""

    text: TextProvider | None = None
    image: ImageProvider | None = None
    audio: AudioProvider | None = None
    speech: SpeechProvider | None = None
    segmentation: SegmentationProvider | None = None
