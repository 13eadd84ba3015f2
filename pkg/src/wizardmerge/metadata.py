"""Definition indicators and raw dependency edges for one merge candidate.

A metadata set is either loaded from a JSON document (the wire format used
by ``--meta-a``/``--meta-b``) or produced by the built-in source extractor.
Validation enforces the structural invariants the rest of the pipeline
relies on: dense ids, resolvable dependency endpoints, and per-file ranges
that are pairwise disjoint or strictly nested.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path

from .diff3 import LineRange


class DefinitionKind(Enum):
    TYPE = "type"
    GLOBAL = "global"
    FUNCTION = "function"


class MetadataError(ValueError):
    """Malformed or inconsistent metadata; the message names the first
    violated invariant."""


@dataclass(frozen=True)
class DefinitionIndicator:
    def_id: int
    name: str
    kind: DefinitionKind
    file: str
    range: LineRange
    parent: int | None = None

    @property
    def display_name(self) -> str:
        return self.name.rsplit("::", 1)[-1]


@dataclass(frozen=True)
class RawDependency:
    from_id: int
    to_id: int


@dataclass(frozen=True)
class MetadataSet:
    variant: str
    definitions: tuple[DefinitionIndicator, ...]
    dependencies: tuple[RawDependency, ...]

    def by_id(self, def_id: int) -> DefinitionIndicator:
        return self._index[def_id]

    @cached_property
    def _index(self) -> dict[int, DefinitionIndicator]:
        return {d.def_id: d for d in self.definitions}

    def defs_in_file(self, file: str) -> list[DefinitionIndicator]:
        return [d for d in self.definitions if d.file == file]


def validate_metadata(meta: MetadataSet) -> MetadataSet:
    defs = meta.definitions
    ids = [d.def_id for d in defs]
    if sorted(ids) != list(range(len(defs))):
        raise MetadataError("def_ids must be dense and unique (0..n-1)")
    seen: set[tuple[str, str, str, int, int]] = set()
    for d in defs:
        key = (d.file, d.name, d.kind.value, d.range.start_line, d.range.end_line)
        if key in seen:
            raise MetadataError(f"duplicate definition {d.name!r} in {d.file}")
        seen.add(key)
        if d.range.is_empty:
            raise MetadataError(f"definition {d.name!r} has an empty range")

    by_id = {d.def_id: d for d in defs}
    by_file: dict[str, list[DefinitionIndicator]] = {}
    for d in defs:
        by_file.setdefault(d.file, []).append(d)
    for file, group in by_file.items():
        group.sort(key=lambda d: (d.range.start_line, -d.range.end_line))
        stack: list[DefinitionIndicator] = []
        for d in group:
            while stack and stack[-1].range.end_line < d.range.start_line:
                stack.pop()
            if stack:
                top = stack[-1]
                if not top.range.contains(d.range):
                    raise MetadataError(
                        f"overlapping non-nested ranges {top.name!r} and "
                        f"{d.name!r} in {file}")
                if top.range == d.range:
                    raise MetadataError(
                        f"identical ranges {top.name!r} and {d.name!r} in {file}")
            stack.append(d)

    for d in defs:
        if d.parent is None:
            continue
        if d.parent not in by_id:
            raise MetadataError(f"unresolved parent def_id {d.parent}")
        parent = by_id[d.parent]
        if parent.kind is not DefinitionKind.TYPE:
            raise MetadataError(f"parent of {d.name!r} is not a type")
        if parent.file != d.file or not parent.range.contains(d.range) \
                or parent.range == d.range:
            raise MetadataError(
                f"parent range of {d.name!r} does not strictly contain it")

    for dep in meta.dependencies:
        if dep.from_id not in by_id or dep.to_id not in by_id:
            raise MetadataError(
                f"unresolved def_id in dependency {dep.from_id}->{dep.to_id}")
        if dep.from_id == dep.to_id:
            raise MetadataError(f"self dependency on def_id {dep.from_id}")
    return meta


def metadata_to_dict(meta: MetadataSet) -> dict:
    return {
        "variant": meta.variant,
        "definitions": [
            {
                "id": d.def_id,
                "name": d.name,
                "kind": d.kind.value,
                "file": d.file,
                "start_line": d.range.start_line,
                "end_line": d.range.end_line,
                "parent": d.parent,
            }
            for d in meta.definitions
        ],
        "dependencies": [
            {"from": dep.from_id, "to": dep.to_id} for dep in meta.dependencies
        ],
    }


def metadata_from_dict(doc: dict) -> MetadataSet:
    try:
        variant = doc["variant"]
        defs = tuple(
            DefinitionIndicator(
                def_id=int(entry["id"]),
                name=str(entry["name"]),
                kind=DefinitionKind(entry["kind"]),
                file=str(entry["file"]),
                range=LineRange(int(entry["start_line"]), int(entry["end_line"])),
                parent=None if entry.get("parent") is None else int(entry["parent"]),
            )
            for entry in doc["definitions"]
        )
        deps = tuple(
            RawDependency(int(entry["from"]), int(entry["to"]))
            for entry in doc["dependencies"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MetadataError(f"bad metadata document: {exc}") from exc
    return validate_metadata(MetadataSet(variant, defs, deps))


def load_metadata(path: str | Path) -> MetadataSet:
    """Load and validate one variant's metadata JSON document."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MetadataError(f"{path}: invalid JSON: {exc}") from exc
    try:
        return metadata_from_dict(doc)
    except MetadataError as exc:
        raise MetadataError(f"{path}: {exc}") from exc


def save_metadata(meta: MetadataSet, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(metadata_to_dict(meta), indent=2) + "\n", encoding="utf-8")
