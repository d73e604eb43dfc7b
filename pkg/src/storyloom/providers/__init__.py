from .base import (
    AudioProvider,
    ChatMessage,
    ImageProvider,
    ProviderSet,
    SegmentationProvider,
    SpeechProvider,
    TextProvider,
)

__all__ = [
    "AudioProvider",
    "ChatMessage",
    "ImageProvider",
    "ProviderSet",
    "SegmentationProvider",
    "SpeechProvider",
    "TextProvider",
]
