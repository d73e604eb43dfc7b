"""Structured prompt building and friendly parameter labels.

``PromptTemplate`` renders a handful of named slots into one comma-joined
prompt string, so pickers can offer "medium / subject / artists / details"
boxes instead of a blank prompt field.  ``PARAMETER_LABELS`` maps raw
generation parameter names to the plain-language label and explanation a
front end should show next to the control.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    slots: tuple[str, ...] = ("medium", "subject", "artists", "details")
    extra: dict = field(default_factory=dict)

    def render(self, **values: str) -> str:
        unknown = set(values) - set(self.slots)
        if unknown:
            raise KeyError(f"unknown slots {sorted(unknown)}; template has {list(self.slots)}")
        parts = [values[slot].strip() for slot in self.slots if values.get(slot, "").strip()]
        return ", ".join(parts)


IMAGE_PROMPT_TEMPLATE = PromptTemplate(name="image")


@dataclass(frozen=True)
class ParameterLabel:
    parameter: str
    label: str
    explanation: str


PARAMETER_LABELS: dict[str, ParameterLabel] = {
    "denoise_steps": ParameterLabel(
        "denoise_steps",
        "boost clarity",
        "The 'boost clarity' option helps eliminate random noise from the "
        "model's output, making it cleaner and more focused, but requiring "
        "longer generation time.",
    ),
    "self_attention": ParameterLabel(
        "self_attention",
        "keep it coherent",
        "Helps the picture hang together as one composition instead of "
        "drifting apart into unrelated regions, at some extra generation time.",
    ),
    "panorama": ParameterLabel(
        "panorama",
        "wide backdrop",
        "Produces an extra-wide image suited to scene backgrounds.",
    ),
    "samples": ParameterLabel(
        "samples",
        "how many to try",
        "Generates several variations at once so you can pick the best one.",
    ),
    "negative_prompt": ParameterLabel(
        "negative_prompt",
        "things to avoid",
        "Words for what should stay out of the picture.",
    ),
    "seed": ParameterLabel(
        "seed",
        "repeat recipe",
        "Using the same seed with the same prompt reproduces the same result; "
        "leave it empty for a fresh variation each time.",
    ),
    "top_p": ParameterLabel(
        "top_p",
        "go wild",
        "Higher values let the sound wander into more surprising territory; "
        "lower values keep it predictable.",
    ),
    "guidance_scale": ParameterLabel(
        "guidance_scale",
        "stick to the prompt",
        "Higher values follow your words more literally; lower values give "
        "the model room to improvise.",
    ),
    "duration_s": ParameterLabel(
        "duration_s",
        "length in seconds",
        "How long the generated sound should run.",
    ),
}


def friendly_label(parameter: str) -> ParameterLabel:
    return PARAMETER_LABELS.get(parameter, ParameterLabel(parameter, parameter, ""))
