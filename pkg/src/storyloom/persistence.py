"""Saving, loading, and exporting story packages.

A package is a directory (or a zip archive with the same layout):

    manifest          canonical JSON: format name, schema version, story id,
                      sorted list of packaged asset ids
    story             canonical JSON story document
    assets/<hash>     raw bytes of each referenced asset, named by sha256

Canonical JSON (sorted keys, two-space indent, trailing newline) makes
saving deterministic: the same story and assets always produce identical
bytes.  Asset files are verified against their names on load, so any
tampering or corruption surfaces as ``CorruptPackage`` rather than as a
silently wrong picture.  Unknown story fields written by newer versions
ride along in ``extra`` dicts and are written back out on save.
"""

from __future__ import annotations

import json
import re
import shutil
import zipfile
from pathlib import Path

from .assets import AssetStore, content_id
from .errors import CorruptPackage, InvalidStory, MissingAsset, UnsupportedVersion
from .model import SCHEMA_VERSION, Story
from .serialize import from_plain, to_plain
from .validation import schema_violations, validate_story

PACKAGE_FORMAT = "storyloom-package"
_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")


def story_to_document(story: Story) -> dict:
    return to_plain(story)


def document_to_story(document: object) -> Story:
    if not isinstance(document, dict):
        raise CorruptPackage("story document is not an object")
    version = document.get("schema_version", SCHEMA_VERSION)
    if not isinstance(version, int) or version > SCHEMA_VERSION:
        raise UnsupportedVersion(
            f"story schema {version!r} is newer than supported {SCHEMA_VERSION}",
            found=version,
            supported=SCHEMA_VERSION,
        )
    try:
        return from_plain(Story, document)
    except (TypeError, ValueError, KeyError) as exc:
        raise CorruptPackage(f"story document malformed: {exc}") from exc


def canonical_json(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _manifest(story: Story) -> dict:
    return {
        "format": PACKAGE_FORMAT,
        "schema_version": SCHEMA_VERSION,
        "story_id": story.story_id,
        "assets": sorted(story.asset_index),
    }


def _gather_assets(story: Story, assets: AssetStore) -> dict[str, bytes]:
    out: dict[str, bytes] = {}
    for asset_id in story.asset_index:
        if asset_id not in assets:
            raise MissingAsset(f"no bytes for {asset_id}", asset_id=asset_id)
        out[asset_id] = assets.get_bytes(asset_id)
    return out


def _check_saveable(story: Story) -> None:
    if not _ID_RE.match(story.story_id):
        raise InvalidStory(f"story id {story.story_id!r} is not a safe file name")
    bad = schema_violations(validate_story(story))
    if bad:
        raise InvalidStory(
            f"{len(bad)} schema violations block saving",
            violations=[to_plain(v) for v in bad],
        )


class PackageStore:
    """Packages on disk under one root directory, keyed by story id."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def package_path(self, package_id: str) -> Path:
        return self.root / package_id

    def list_packages(self) -> list[str]:
        return sorted(
            p.name for p in self.root.iterdir() if (p / "manifest").is_file()
        )

    def save(self, story: Story, assets: AssetStore) -> str:
        _check_saveable(story)
        data = _gather_assets(story, assets)
        target = self.package_path(story.story_id)
        staging = target.with_name(target.name + ".tmp")
        if staging.exists():
            shutil.rmtree(staging)
        (staging / "assets").mkdir(parents=True)
        (staging / "manifest").write_text(canonical_json(_manifest(story)), encoding="utf-8")
        (staging / "story").write_text(canonical_json(story_to_document(story)), encoding="utf-8")
        for asset_id, blob in data.items():
            (staging / "assets" / asset_id).write_bytes(blob)
        if target.exists():
            shutil.rmtree(target)
        staging.rename(target)
        return story.story_id

    def load(self, package_id: str, assets: AssetStore | None = None) -> Story:
        return load_story(self.package_path(package_id), assets)


def save_story(story: Story, assets: AssetStore, store: PackageStore) -> str:
    return store.save(story, assets)


class _DirReader:
    def __init__(self, root: Path):
        self.root = root

    def read(self, name: str) -> bytes:
        path = self.root / name
        if not path.is_file():
            raise KeyError(name)
        return path.read_bytes()


class _ZipReader:
    def __init__(self, path: Path):
        try:
            self.zf = zipfile.ZipFile(path)
        except (zipfile.BadZipFile, OSError) as exc:
            raise CorruptPackage(f"not a readable archive: {exc}") from exc
        self.names = set(self.zf.namelist())

    def read(self, name: str) -> bytes:
        if name not in self.names:
            raise KeyError(name)
        return self.zf.read(name)


def _read_json(reader, name: str) -> object:
    try:
        raw = reader.read(name)
    except KeyError:
        raise CorruptPackage(f"package has no {name!r} file", missing=name) from None
    try:
        return json.loads(raw.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise CorruptPackage(f"{name} is not valid JSON: {exc}", file=name) from exc


def load_story(source: Path | str, assets: AssetStore | None = None) -> Story:
    """Load a package directory or zip archive; verifies every asset's
    bytes against its content hash and fills ``assets`` when given."""
    path = Path(source)
    if path.is_dir():
        reader = _DirReader(path)
    elif path.is_file():
        reader = _ZipReader(path)
    else:
        raise CorruptPackage(f"no package at {path}", path=str(path))

    manifest = _read_json(reader, "manifest")
    if not isinstance(manifest, dict) or manifest.get("format") != PACKAGE_FORMAT:
        raise CorruptPackage("manifest is not a story package manifest")
    version = manifest.get("schema_version", SCHEMA_VERSION)
    if not isinstance(version, int) or version > SCHEMA_VERSION:
        raise UnsupportedVersion(
            f"package schema {version!r} is newer than supported {SCHEMA_VERSION}",
            found=version,
            supported=SCHEMA_VERSION,
        )
    story = document_to_story(_read_json(reader, "story"))

    for asset_id, ref in story.asset_index.items():
        try:
            blob = reader.read(f"assets/{asset_id}")
        except KeyError:
            raise MissingAsset(f"package lacks bytes for {asset_id}", asset_id=asset_id) from None
        if content_id(blob) != asset_id:
            raise CorruptPackage(
                f"asset {asset_id} bytes do not match their hash",
                reason="AssetHashMismatch",
                asset_id=asset_id,
            )
        if assets is not None:
            assets.put_ref(ref, blob)
    return story


def export_package(story: Story, assets: AssetStore, dest: Path | str) -> Path:
    """Write the story as a single zip archive (same layout as a package
    directory).  Timestamps are fixed, so identical input gives identical
    archive bytes."""
    _check_saveable(story)
    data = _gather_assets(story, assets)
    dest = Path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    epoch = (1980, 1, 1, 0, 0, 0)

    def entry(name: str) -> zipfile.ZipInfo:
        info = zipfile.ZipInfo(name, date_time=epoch)
        info.compress_type = zipfile.ZIP_DEFLATED
        return info

    with zipfile.ZipFile(dest, "w") as zf:
        zf.writestr(entry("manifest"), canonical_json(_manifest(story)))
        zf.writestr(entry("story"), canonical_json(story_to_document(story)))
        for asset_id in sorted(data):
            zf.writestr(entry(f"assets/{asset_id}"), data[asset_id])
    return dest
