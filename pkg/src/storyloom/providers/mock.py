"""Deterministic offline providers.

Every output is a pure function of the request (hash-seeded), so tests
and demos behave identically run to run with no network.  Each provider
records its calls and can be told to fail via ``fail_with``; image,
audio, and speech providers accept an artificial ``latency_s`` so queue
behavior can be observed.

The text provider plays the three roles the engine asks of a chat model
(story co-writer, screenwriter, prompt refiner), keying off the system
prompt it is given.  Its screenplay output is deliberately the
single-quoted pseudo-JSON with a line of commentary that real chat
models tend to produce, so the tolerant parser gets exercised end to
end.
"""

from __future__ import annotations

import hashlib
import io
import math
import re
import struct
import time
import wave
from typing import Sequence

from PIL import Image, ImageDraw

from ..errors import ProviderError
from ..prompts import REFINE_SYSTEM_PROMPT, SCREENPLAY_USER_TEMPLATE, SCREENWRITER_SYSTEM_PROMPT
from .base import ChatMessage


def _digest(material: str) -> bytes:
    return hashlib.sha256(material.encode("utf-8")).digest()


def _png_bytes(im: Image.Image) -> bytes:
    buf = io.BytesIO()
    im.save(buf, format="PNG")
    return buf.getvalue()


def _wav_bytes(material: str, duration_s: float, rate: int = 8000) -> bytes:
    d = _digest(material)
    freq = 120 + d[0] * 3
    amp = 0.2 + d[1] / 1020
    n = max(1, int(rate * duration_s))
    frames = bytearray()
    for i in range(n):
        value = int(32767 * amp * math.sin(2 * math.pi * freq * i / rate))
        frames += struct.pack("<h", value)
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(bytes(frames))
    return buf.getvalue()


def _strip_quotes(text: str) -> str:
    """Drop quote characters that would confuse single-quoted output;
    intra-word apostrophes stay."""
    text = text.replace('"', "")
    return re.sub(r"(?<![A-Za-z])'|'(?![A-Za-z])", "", text)


def _cast_of(text: str) -> list[str]:
    names: list[str] = []
    for sentence in re.split(r"(?<=[.!?])\s+", text):
        for word in sentence.split()[1:]:
            m = re.fullmatch(r"([A-Z][a-z]+)\W*", word)
            if m and m.group(1) not in names:
                names.append(m.group(1))
    return names


def synthesize_screenplay(storyline: str) -> str:
    """Deterministic screenwriter stand-in: storyline in, pseudo-JSON out."""
    sentences = [s.strip() for s in re.split(r"(?<=[.!?])\s+", storyline.strip()) if s.strip()]
    if not sentences:
        sentences = ["An empty page waits for a story."]
    n = min(3, len(sentences))
    size, rem = divmod(len(sentences), n)
    chunks, at = [], 0
    for i in range(n):
        take = size + (1 if i < rem else 0)
        chunks.append(sentences[at : at + take])
        at += take
    scenes = []
    for i, chunk in enumerate(chunks):
        text = _strip_quotes(" ".join(chunk))
        words = re.findall(r"[A-Za-z][A-Za-z']*", text)
        name = " ".join(words[:4]).title() or f"Scene {i + 1}"
        background = " ".join(words[:8]).lower() or "a plain room"
        cast = _cast_of(text) or ["Narrator"]
        speaker = cast[0]
        speech = f"Let's see what happens next, {cast[1]}." if len(cast) > 1 else "Let's keep going."
        scenes.append(
            "{'sceneName': '%s','backgroundDescription': '%s', 'narration': '%s',"
            "'characters':[%s],'dialogue':[{'speaker':'%s','speech':'%s'}]}"
            % (name, background, text, ",".join(f"'{c}'" for c in cast), speaker, speech)
        )
    return "Sure! Here is the screenplay for your storyline: [" + ", ".join(scenes) + "]"


_COLLAB_STEMS = (
    "I love that. What if {frag} leads somewhere unexpected, like a hidden door?",
    "Great idea. Should {frag} bring the characters closer together, or pull them apart?",
    "Let's build on that: perhaps {frag} happens at night. Who notices first?",
    "Nice. After {frag}, does anyone have second thoughts about the journey?",
)


class MockTextProvider:
    name = "mock-chat"

    def __init__(self, replies: Sequence[str] | None = None, fail_with: Exception | None = None):
        self.replies = list(replies) if replies is not None else None
        self.fail_with = fail_with
        self.calls: list[tuple[ChatMessage, ...]] = []

    def chat(self, messages: Sequence[ChatMessage]) -> str:
        if self.fail_with is not None:
            raise self.fail_with
        self.calls.append(tuple(messages))
        if self.replies is not None:
            if not self.replies:
                raise ProviderError("scripted replies exhausted")
            return self.replies.pop(0)
        system = messages[0].content if messages and messages[0].role == "system" else ""
        last_user = next((m.content for m in reversed(messages) if m.role == "user"), "")
        if system == SCREENWRITER_SYSTEM_PROMPT:
            storyline = last_user
            if storyline.startswith(SCREENPLAY_USER_TEMPLATE):
                storyline = storyline[len(SCREENPLAY_USER_TEMPLATE):]
            return synthesize_screenplay(storyline)
        if system == REFINE_SYSTEM_PROMPT:
            subject = _strip_quotes(last_user.strip().rstrip("."))
            return f"{subject}, bathed in soft light, edges crisp, quietly alive with small detail"
        words = re.findall(r"[A-Za-z']+", last_user)
        frag = " ".join(words[-4:]).lower() or "that thought"
        stem = _COLLAB_STEMS[_digest(last_user)[0] % len(_COLLAB_STEMS)]
        return stem.format(frag=frag)


class MockImageProvider:
    name = "mock-diffusion"

    def __init__(self, latency_s: float = 0.0, fail_with: Exception | None = None, size: int = 64):
        self.latency_s = latency_s
        self.fail_with = fail_with
        self.size = size
        self.calls: list = []

    def generate(self, request) -> list[bytes]:
        if self.fail_with is not None:
            raise self.fail_with
        self.calls.append(request)
        if self.latency_s:
            time.sleep(self.latency_s)
        out = []
        for i in range(request.samples):
            d = _digest(
                f"{request.prompt}|{request.negative_prompt}|{request.seed}|"
                f"{request.denoise_steps}|{request.self_attention}|{i}"
            )
            w = self.size * 2 if request.panorama else self.size
            h = self.size
            im = Image.new("RGB", (w, h), (d[0], d[1], d[2]))
            draw = ImageDraw.Draw(im)
            x0, y0 = d[3] % (w // 2), d[4] % (h // 2)
            draw.rectangle([x0, y0, x0 + d[5] % (w // 2) + 4, y0 + d[6] % (h // 2) + 4],
                           fill=(d[7], d[8], d[9]))
            draw.ellipse([w // 4, h // 4, w // 4 + d[10] % (w // 2) + 4, h // 4 + d[11] % (h // 2) + 4],
                         fill=(d[12], d[13], d[14]))
            out.append(_png_bytes(im))
        return out


class MockAudioProvider:
    name = "mock-audio"

    def __init__(self, latency_s: float = 0.0, fail_with: Exception | None = None):
        self.latency_s = latency_s
        self.fail_with = fail_with
        self.calls: list[tuple[str, object]] = []

    def generate(self, request) -> bytes:
        if self.fail_with is not None:
            raise self.fail_with
        model = "mock-musicgen" if request.kind.value == "music" else "mock-audiogen"
        self.calls.append((model, request))
        if self.latency_s:
            time.sleep(self.latency_s)
        material = (
            f"{model}|{request.prompt}|{request.duration_s}|{request.top_p}|"
            f"{request.guidance_scale}|{request.seed}"
        )
        return _wav_bytes(material, request.duration_s)


class MockSpeechProvider:
    name = "mock-tts"

    def __init__(self, latency_s: float = 0.0, fail_with: Exception | None = None):
        self.latency_s = latency_s
        self.fail_with = fail_with
        self.calls: list = []

    def synthesize(self, request) -> bytes:
        if self.fail_with is not None:
            raise self.fail_with
        self.calls.append(request)
        if self.latency_s:
            time.sleep(self.latency_s)
        profile = request.profile
        duration = min(6.0, 0.4 + 0.05 * len(request.text) / profile.speed)
        material = f"{request.text}|{profile.voice_id}|{profile.pitch}|{profile.speed}"
        return _wav_bytes(material, duration)


class MockSegmentationProvider:
    name = "mock-sam"

    def __init__(self, fail_with: Exception | None = None):
        self.fail_with = fail_with
        self.calls: list = []

    def segment(self, image: bytes, hint) -> tuple[bytes, tuple[int, int, int, int]]:
        if self.fail_with is not None:
            raise self.fail_with
        self.calls.append(hint)
        im = Image.open(io.BytesIO(image))
        width, height = im.size
        if hint.width is not None:
            x0 = int(hint.x * width)
            y0 = int(hint.y * height)
            x1 = int((hint.x + hint.width) * width)
            y1 = int((hint.y + hint.height) * height)
        else:
            half_w, half_h = max(2, width // 8), max(2, height // 8)
            cx, cy = int(hint.x * width), int(hint.y * height)
            x0, y0, x1, y1 = cx - half_w, cy - half_h, cx + half_w, cy + half_h
        x0c, y0c = max(0, x0), max(0, y0)
        x1c, y1c = min(width, x1), min(height, y1)
        if x1c <= x0c or y1c <= y0c:
            return b"", (0, 0, 0, 0)
        cut = im.crop((x0c, y0c, x1c, y1c)).convert("RGBA")
        return _png_bytes(cut), (x0c, y0c, x1c - x0c, y1c - y0c)


def mock_provider_set(latency_s: float = 0.0):
    from .base import ProviderSet

    return ProviderSet(
        text=MockTextProvider(),
        image=MockImageProvider(latency_s=latency_s),
        audio=MockAudioProvider(latency_s=latency_s),
        speech=MockSpeechProvider(latency_s=latency_s),
        segmentation=MockSegmentationProvider(),
    )
