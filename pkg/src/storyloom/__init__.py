"""Headless engine for authoring and playing branching visual stories."""

from .model import (
    AssetKind,
    AssetRef,
    DialogueLine,
    Edge,
    ElementKind,
    InteractionSpec,
    ParticleEffect,
    Provenance,
    Response,
    Scene,
    SceneElement,
    ScreenplayScene,
    Story,
    TimelineClip,
    Track,
    VoiceProfile,
    new_story,
    register_asset,
    with_scene,
)
from .validation import Severity, Violation, validate_story

__all__ = [
    "AssetKind",
    "AssetRef",
    "DialogueLine",
    "Edge",
    "ElementKind",
    "InteractionSpec",
    "ParticleEffect",
    "Provenance",
    "Response",
    "Scene",
    "SceneElement",
    "ScreenplayScene",
    "Severity",
    "Story",
    "TimelineClip",
    "Track",
    "Violation",
    "VoiceProfile",
    "new_story",
    "register_asset",
    "validate_story",
    "with_scene",
]

__version__ = "0.1.0"
