"""Storyline chat and screenplay compilation.

``parse_screenplay`` never raises: chat models asked for "JSON" return
strict JSON on a good day and single-quoted pseudo-JSON wrapped in
commentary on most others, so parsing is progressive repair.  Each step
that changes the text or drops content leaves a human-readable note in
``ParseReport.repairs``; a report is ``rejected`` exactly when nothing
scene-shaped survived.

Repair pipeline, in order:

1. strict parse of the input as given;
2. extraction of the largest bracket-balanced span (sheds commentary);
3. quote normalization (single -> double, string-aware), control
   character escaping, trailing comma removal, Python literal
   conversion, then another strict parse;
4. salvage of individual complete ``{...}`` objects from a truncated
   list;
5. per-scene field checks (unknown fields ignored, missing ones
   defaulted, nameless scenes dropped).
"""

from __future__ import annotations

import json
import re
import uuid
from dataclasses import dataclass, field

from .errors import EmptyStoryline, EmptyText, ProviderError
from .model import DialogueLine, ScreenplayScene
from .prompts import SCREENPLAY_USER_TEMPLATE, SCREENWRITER_SYSTEM_PROMPT, STORYLINE_SYSTEM_PROMPT
from .providers.base import ChatMessage, TextProvider


@dataclass(frozen=True)
class ChatSession:
    """Append-only chat transcript; first message is the system prompt."""

    session_id: str
    system_prompt: str
    messages: tuple[ChatMessage, ...]


@dataclass(frozen=True)
class ParseReport:
    scenes: tuple[ScreenplayScene, ...]
    repairs: tuple[str, ...] = ()
    rejected: bool = False


def _report(scenes: list[ScreenplayScene], repairs: list[str]) -> ParseReport:
    return ParseReport(tuple(scenes), tuple(repairs), rejected=not scenes)


def new_storyline_session(session_id: str | None = None) -> ChatSession:
    return ChatSession(
        session_id=session_id or uuid.uuid4().hex[:12],
        system_prompt=STORYLINE_SYSTEM_PROMPT,
        messages=(ChatMessage("system", STORYLINE_SYSTEM_PROMPT),),
    )


def _chat(provider: TextProvider, messages: tuple[ChatMessage, ...]) -> str:
    try:
        return provider.chat(messages)
    except ProviderError:
        raise
    except Exception as exc:
        raise ProviderError(f"text provider failed: {exc}", cause=repr(exc)) from exc


def chat_turn(
    session: ChatSession, user_text: str, provider: TextProvider
) -> tuple[ChatSession, str]:
    """One co-writing exchange; on provider failure the session is unchanged."""
    if not user_text.strip():
        raise EmptyText("chat turn is empty")
    messages = session.messages + (ChatMessage("user", user_text),)
    reply = _chat(provider, messages)
    return (
        ChatSession(
            session_id=session.session_id,
            system_prompt=session.system_prompt,
            messages=messages + (ChatMessage("assistant", reply),),
        ),
        reply,
    )


def compile_screenplay(storyline: str, provider: TextProvider) -> ParseReport:
    if not storyline.strip():
        raise EmptyStoryline("storyline is empty")
    raw = _chat(
        provider,
        (
            ChatMessage("system", SCREENWRITER_SYSTEM_PROMPT),
            ChatMessage("user", SCREENPLAY_USER_TEMPLATE + storyline),
        ),
    )
    return parse_screenplay(raw)


# --- tolerant parsing ------------------------------------------------------

_OPENERS = {"[": "]", "{": "}"}


def _extract_span(raw: str) -> tuple[str | None, bool]:
    """Largest bracket-balanced region; (None, False) if no bracket at all.

    Double-quoted strings are honored while counting brackets.  Returns
    (span, True) when surrounding text was shed.
    """
    complete: list[tuple[int, int]] = []
    start = None
    depth = 0
    in_string = False
    i = 0
    while i < len(raw):
        ch = raw[i]
        if in_string:
            if ch == "\\":
                i += 2
                continue
            if ch == '"':
                in_string = False
        elif ch == '"' and depth > 0:
            in_string = True
        elif ch in _OPENERS:
            if depth == 0:
                start = i
            depth += 1
        elif ch in ("]", "}"):
            if depth > 0:
                depth -= 1
                if depth == 0 and start is not None:
                    complete.append((start, i + 1))
                    start = None
        i += 1
    if complete:
        begin, end = max(complete, key=lambda span: span[1] - span[0])
    elif start is not None:
        begin, end = start, len(raw)
    else:
        return None, False
    span = raw[begin:end]
    return span, span.strip() != raw.strip()


def _normalize_quotes(text: str) -> tuple[str, dict]:
    out: list[str] = []
    flags = {"quotes": False, "controls": False}
    state = "outside"
    i = 0
    while i < len(text):
        ch = text[i]
        if state == "outside":
            if ch == '"':
                state = "double"
                out.append(ch)
            elif ch == "'":
                state = "single"
                flags["quotes"] = True
                out.append('"')
            else:
                out.append(ch)
        elif state == "double":
            if ch == "\\" and i + 1 < len(text):
                out.append(text[i : i + 2])
                i += 2
                continue
            if ch == '"':
                state = "outside"
                out.append(ch)
            elif ch in "\n\r\t":
                flags["controls"] = True
                out.append({"\n": "\\n", "\r": "\\r", "\t": "\\t"}[ch])
            else:
                out.append(ch)
        else:  # single-quoted string
            if ch == "\\" and i + 1 < len(text):
                nxt = text[i + 1]
                if nxt == "'":
                    out.append("'")
                else:
                    out.append(text[i : i + 2])
                i += 2
                continue
            if ch == "'":
                j = i + 1
                while j < len(text) and text[j] in " \t":
                    j += 1
                # a quote before a structural character closes the string;
                # anything else is a literal apostrophe inside it
                if j >= len(text) or text[j] in ",:]}\n\r":
                    state = "outside"
                    out.append('"')
                else:
                    out.append("'")
            elif ch == '"':
                out.append('\\"')
            elif ch in "\n\r\t":
                flags["controls"] = True
                out.append({"\n": "\\n", "\r": "\\r", "\t": "\\t"}[ch])
            else:
                out.append(ch)
        i += 1
    return "".join(out), flags


_PY_LITERALS = {"True": "true", "False": "false", "None": "null"}


def _normalize_tokens(text: str) -> tuple[str, dict]:
    """Outside strings: drop trailing commas, convert Python literals.
    Assumes quotes are already strict (run after _normalize_quotes)."""
    out: list[str] = []
    flags = {"commas": False, "literals": False}
    in_string = False
    i = 0
    while i < len(text):
        ch = text[i]
        if in_string:
            if ch == "\\" and i + 1 < len(text):
                out.append(text[i : i + 2])
                i += 2
                continue
            if ch == '"':
                in_string = False
            out.append(ch)
        elif ch == '"':
            in_string = True
            out.append(ch)
        elif ch == ",":
            j = i + 1
            while j < len(text) and text[j] in " \t\n\r":
                j += 1
            if j < len(text) and text[j] in "]}":
                flags["commas"] = True
            else:
                out.append(ch)
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word in _PY_LITERALS:
                flags["literals"] = True
                out.append(_PY_LITERALS[word])
            else:
                out.append(word)
            i = j
            continue
        else:
            out.append(ch)
        i += 1
    return "".join(out), flags


def _salvage_objects(text: str) -> list:
    """Complete top-level ``{...}`` objects from a truncated or mangled list."""
    objects = []
    depth = 0
    start = None
    in_string = False
    i = 0
    while i < len(text):
        ch = text[i]
        if in_string:
            if ch == "\\":
                i += 2
                continue
            if ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "{":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "}":
            if depth > 0:
                depth -= 1
                if depth == 0 and start is not None:
                    try:
                        objects.append(json.loads(text[start : i + 1]))
                    except ValueError:
                        pass
                    start = None
        i += 1
    return objects


_KNOWN_FIELDS = ("sceneName", "backgroundDescription", "narration", "characters", "dialogue")


def _scene_from(item: object, index: int, notes: list[str]) -> ScreenplayScene | None:
    if not isinstance(item, dict):
        notes.append(f"scene {index}: dropped (not an object)")
        return None
    for key in item:
        if key not in _KNOWN_FIELDS:
            notes.append(f"scene {index}: unknown field {key!r} ignored")
    name = item.get("sceneName")
    if not isinstance(name, str) or not name.strip():
        notes.append(f"scene {index}: dropped (missing sceneName)")
        return None

    def text_field(key: str) -> str:
        value = item.get(key)
        if isinstance(value, str):
            return value
        if value is None and key not in item:
            notes.append(f"scene {index}: missing field {key!r} defaulted")
        else:
            notes.append(f"scene {index}: field {key!r} not a string, defaulted")
        return ""

    characters: list[str] = []
    if "characters" not in item:
        notes.append(f"scene {index}: missing field 'characters' defaulted")
    elif not isinstance(item["characters"], list):
        notes.append(f"scene {index}: field 'characters' not a list, defaulted")
    else:
        for entry in item["characters"]:
            if isinstance(entry, str):
                characters.append(entry)
            else:
                notes.append(f"scene {index}: non-string character dropped")

    dialogue: list[DialogueLine] = []
    if "dialogue" not in item:
        notes.append(f"scene {index}: missing field 'dialogue' defaulted")
    elif not isinstance(item["dialogue"], list):
        notes.append(f"scene {index}: field 'dialogue' not a list, defaulted")
    else:
        for j, entry in enumerate(item["dialogue"], 1):
            if not isinstance(entry, dict):
                notes.append(f"scene {index}: dialogue entry {j} dropped (not an object)")
                continue
            speaker = entry.get("speaker")
            speech = entry.get("speech")
            dialogue.append(
                DialogueLine(
                    speaker=speaker if isinstance(speaker, str) else "",
                    speech=speech if isinstance(speech, str) else "",
                )
            )

    return ScreenplayScene(
        sceneName=name,
        backgroundDescription=text_field("backgroundDescription"),
        narration=text_field("narration"),
        characters=tuple(characters),
        dialogue=tuple(dialogue),
    )


def parse_screenplay(raw: str) -> ParseReport:
    """Best-effort screenplay recovery; see module docstring.  Never raises."""
    repairs: list[str] = []
    if not raw or not raw.strip():
        return _report([], ["input is empty"])
    data = None
    try:
        data = json.loads(raw)
    except ValueError:
        span, trimmed = _extract_span(raw)
        if span is None:
            return _report([], ["no JSON structure found"])
        if trimmed:
            repairs.append("trimmed surrounding commentary")
        try:
            data = json.loads(span)
        except ValueError:
            normalized, qflags = _normalize_quotes(span)
            normalized, tflags = _normalize_tokens(normalized)
            if qflags["quotes"]:
                repairs.append("normalized single-quoted strings")
            if qflags["controls"]:
                repairs.append("escaped raw control characters in strings")
            if tflags["commas"]:
                repairs.append("removed trailing commas")
            if tflags["literals"]:
                repairs.append("converted Python literals")
            try:
                data = json.loads(normalized)
            except ValueError:
                salvaged = _salvage_objects(normalized)
                if not salvaged:
                    repairs.append("could not recover any scene")
                    return _report([], repairs)
                repairs.append("recovered complete scenes from a truncated list")
                data = salvaged

    if isinstance(data, dict):
        repairs.append("wrapped single scene object in a list")
        data = [data]
    if not isinstance(data, list):
        repairs.append("top-level JSON is not a list of scenes")
        return _report([], repairs)

    scenes: list[ScreenplayScene] = []
    for index, item in enumerate(data, 1):
        scene = _scene_from(item, index, repairs)
        if scene is not None:
            scenes.append(scene)
    return _report(scenes, repairs)


def screenplay_to_json(scenes: tuple[ScreenplayScene, ...] | list[ScreenplayScene]) -> str:
    """Strict-JSON rendering in the wire schema; parses back losslessly."""
    payload = [
        {
            "sceneName": s.sceneName,
            "backgroundDescription": s.backgroundDescription,
            "narration": s.narration,
            "characters": list(s.characters),
            "dialogue": [{"speaker": d.speaker, "speech": d.speech} for d in s.dialogue],
        }
        for s in scenes
    ]
    return json.dumps(payload, ensure_ascii=False, indent=2)
