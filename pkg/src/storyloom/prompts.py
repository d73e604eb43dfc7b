"""Prompt templates shipped as versioned resources.

The template texts live under ``resources/prompts`` and are loaded once at
import.  They are part of the product's observable behavior (tests pin the
exact bytes), so edits to the files are deliberate versioned changes, not
incidental reformatting.  ``SCREENPLAY_USER_TEMPLATE`` ends with a trailing
space; the storyline is appended directly after it.
"""

from __future__ import annotations

from importlib import resources


def _load(name: str) -> str:
    return (
        resources.files("storyloom")
        .joinpath("resources", "prompts", name)
        .read_text(encoding="utf-8")
    )


STORYLINE_SYSTEM_PROMPT = _load("storyline_system.txt")
SCREENWRITER_SYSTEM_PROMPT = _load("screenwriter_system.txt")
SCREENPLAY_USER_TEMPLATE = _load("screenplay_user.txt")
REFINE_SYSTEM_PROMPT = _load("refine_system.txt")

# Prompt used for the placeholder scene backgrounds painted when a
# screenplay first lands on the storyboard.
MONOCHROME_BACKGROUND_TEMPLATE = "a monochromatic background of {description}"


def screenplay_prompt(storyline: str) -> str:
    return SCREENPLAY_USER_TEMPLATE + storyline


def monochrome_background_prompt(description: str) -> str:
    return MONOCHROME_BACKGROUND_TEMPLATE.format(description=description)
