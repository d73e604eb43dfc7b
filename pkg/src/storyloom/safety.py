"""Content screening for prompts and generated media descriptions.

The default policy is a word-boundary term list: deny terms refuse the
request outright, warn terms let it through flagged so viewers see a
trigger warning before the asset is revealed.  Matching is intentionally
dumb and transparent; deployments can swap in a smarter policy object as
long as it keeps ``check_text``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

DEFAULT_WARN_TERMS = {
    "blood": "violence",
    "weapon": "violence",
    "gun": "violence",
    "knife": "violence",
    "fight": "violence",
    "ghost": "horror",
    "skeleton": "horror",
    "zombie": "horror",
    "scary": "horror",
    "horror": "horror",
    "creepy": "horror",
    "spider": "phobia",
    "snake": "phobia",
    "fire": "danger",
    "explosion": "danger",
    "storm": "danger",
    "death": "death",
    "dead": "death",
    "dying": "death",
}

DEFAULT_DENY_TERMS = {
    "gore": "graphic_violence",
    "mutilation": "graphic_violence",
    "torture": "graphic_violence",
    "suicide": "self_harm",
    "self-harm": "self_harm",
}


@dataclass(frozen=True)
class SafetyVerdict:
    allowed: bool
    trigger_warning: bool = False
    categories: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)


class SafetyPolicy:
    def __init__(
        self,
        warn_terms: dict[str, str] | None = None,
        deny_terms: dict[str, str] | None = None,
    ):
        self.warn_terms = DEFAULT_WARN_TERMS if warn_terms is None else warn_terms
        self.deny_terms = DEFAULT_DENY_TERMS if deny_terms is None else deny_terms
        self._patterns = [
            (re.compile(rf"\b{re.escape(term)}\b", re.IGNORECASE), category, deny)
            for terms, deny in ((self.deny_terms, True), (self.warn_terms, False))
            for term, category in terms.items()
        ]

    def check_text(self, text: str) -> SafetyVerdict:
        denied: list[str] = []
        warned: list[str] = []
        for pattern, category, deny in self._patterns:
            if pattern.search(text):
                (denied if deny else warned).append(category)
        if denied:
            return SafetyVerdict(False, False, tuple(dict.fromkeys(denied)))
        if warned:
            return SafetyVerdict(True, True, tuple(dict.fromkeys(warned)))
        return SafetyVerdict(True)


def check_safety(text: str, policy: SafetyPolicy | None = None) -> SafetyVerdict:
    return (policy or SafetyPolicy()).check_text(text)
