"""Content-addressed asset storage.

Asset ids are the sha256 hex digest of the bytes, so identical outputs
dedup to one stored copy and any tampering is detectable by rehashing.
"""

from __future__ import annotations

import hashlib
from typing import Iterator

from .errors import UnknownAsset
from .model import AssetKind, AssetRef, Provenance

_KIND_MEDIA = {
    AssetKind.IMAGE: "image/",
    AssetKind.CHARACTER_CUTOUT: "image/",
    AssetKind.AUDIO_EFFECT: "audio/",
    AssetKind.MUSIC: "audio/",
    AssetKind.SPEECH: "audio/",
}


def content_id(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class AssetStore:
    """In-memory byte store keyed by content hash."""

    def __init__(self) -> None:
        self._bytes: dict[str, bytes] = {}
        self._refs: dict[str, AssetRef] = {}

    def put(
        self,
        data: bytes,
        kind: AssetKind,
        media_type: str,
        provenance: Provenance,
    ) -> AssetRef:
        if not media_type.startswith(_KIND_MEDIA[kind]):
            raise ValueError(f"{kind.value} asset cannot be {media_type}")
        asset_id = content_id(data)
        ref = AssetRef(
            asset_id=asset_id,
            kind=kind,
            media_type=media_type,
            provenance=provenance,
            byte_length=len(data),
        )
        self._bytes[asset_id] = data
        self._refs[asset_id] = ref
        return ref

    def put_ref(self, ref: AssetRef, data: bytes) -> None:
        """Adopt an existing ref (e.g. from a loaded package) with its bytes."""
        if content_id(data) != ref.asset_id:
            raise ValueError(f"bytes do not hash to {ref.asset_id}")
        self._bytes[ref.asset_id] = data
        self._refs[ref.asset_id] = ref

    def get_bytes(self, asset_id: str) -> bytes:
        try:
            return self._bytes[asset_id]
        except KeyError:
            raise UnknownAsset(f"no asset {asset_id!r}", asset_id=asset_id) from None

    def get_ref(self, asset_id: str) -> AssetRef:
        try:
            return self._refs[asset_id]
        except KeyError:
            raise UnknownAsset(f"no asset {asset_id!r}", asset_id=asset_id) from None

    def __contains__(self, asset_id: str) -> bool:
        return asset_id in self._bytes

    def __len__(self) -> int:
        return len(self._bytes)

    def refs(self) -> Iterator[AssetRef]:
        return iter(self._refs.values())
