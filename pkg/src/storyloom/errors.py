"""Shared error vocabulary.

Every raised error carries a stable machine-readable ``code`` so callers
(including the HTTP service) can dispatch without parsing messages.
"""

from __future__ import annotations

from typing import Any


class StoryError(Exception):
    """Base class for all domain errors.

    ``code`` identifies the failure; ``detail`` holds structured context
    (offending ids, limits, validator output) safe to serialize.
    """

    code = "StoryError"

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_dict(self) -> dict:
        return {"error": self.code, "message": self.message, "detail": self.detail}


def _make(code: str, doc: str) -> type[StoryError]:
    cls = type(code, (StoryError,), {"code": code, "__doc__": doc})
    return cls


# Story model / storyboard graph
UnknownScene = _make("UnknownScene", "A referenced scene id is not in the story.")
RemovingStartScene = _make("RemovingStartScene", "Attempt to delete the start scene.")
MissingResponseLabel = _make(
    "MissingResponseLabel", "Labeled link names a response the interaction lacks."
)
AmbiguousSuccessor = _make(
    "AmbiguousSuccessor", "A non-interactive scene would gain a second successor."
)
DuplicateEdge = _make("DuplicateEdge", "An identical edge already exists.")
EdgeLabelWithoutInteraction = _make(
    "EdgeLabelWithoutInteraction", "Labeled link from a scene that has no interaction."
)
InvalidStory = _make("InvalidStory", "Story fails validation; see detail['violations'].")

# Screenplay compiler
EmptyStoryline = _make("EmptyStoryline", "Storyline text is empty or whitespace.")
EmptyText = _make("EmptyText", "Chat turn text is empty or whitespace.")

# Scene canvas / timeline
InvalidElement = _make("InvalidElement", "Scene element violates a shape constraint.")
UnknownElement = _make("UnknownElement", "Element id is not in the scene.")
OutOfCanvas = _make("OutOfCanvas", "Path endpoint falls outside the unit canvas.")
UnknownTarget = _make("UnknownTarget", "Clip target is not a known element or asset.")
OverlapConflict = _make(
    "OverlapConflict", "Clip would overlap another on the same track and target."
)
NonPositiveDuration = _make("NonPositiveDuration", "Duration must be positive.")
UnknownClip = _make("UnknownClip", "Clip id is not in the scene.")
InvalidInteraction = _make(
    "InvalidInteraction", "Interaction needs at least two uniquely labeled responses."
)

# Generation, jobs, safety
RangeError = _make("RangeError", "Request parameter is outside its allowed range.")
EmptyPrompt = _make("EmptyPrompt", "Prompt text is empty or whitespace.")
ProviderError = _make("ProviderError", "Provider call failed or returned bad output.")
SafetyBlocked = _make("SafetyBlocked", "Safety policy refused the request.")
EmptyMask = _make("EmptyMask", "Segmentation hint selects no pixels.")
UnknownAsset = _make("UnknownAsset", "Asset id is not in the store.")
UnknownJob = _make("UnknownJob", "Job id is not known to the queue.")
QueueFull = _make("QueueFull", "Job backlog is at capacity.")

# Playback
NotPlaying = _make("NotPlaying", "Tick requires the playing phase.")
InvalidTick = _make("InvalidTick", "Tick duration must be positive.")
UnknownResponse = _make("UnknownResponse", "Label matches no response of the prompt.")
NotAwaitingInput = _make("NotAwaitingInput", "No interaction prompt is pending.")

# Persistence
CorruptPackage = _make("CorruptPackage", "Package bytes cannot be decoded or verified.")
UnsupportedVersion = _make("UnsupportedVersion", "Package schema version is newer than this code.")
MissingAsset = _make("MissingAsset", "A referenced asset's bytes are absent.")

# Service / CLI
BadRequest = _make("BadRequest", "Request body is malformed or incomplete.")
BadConfig = _make("BadConfig", "Configuration file is invalid.")
BindError = _make("BindError", "Server could not bind its port.")
Unauthorized = _make("Unauthorized", "Missing or wrong access token.")
UnknownStory = _make("UnknownStory", "Story id is not in the workspace.")
UnknownSession = _make("UnknownSession", "Session id is not known.")
