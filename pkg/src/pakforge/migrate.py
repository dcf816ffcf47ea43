"""Triage for moving a legacy project into a freshly generated layout.

File trees are reduced to manifests (relative path -> content digest).
Comparing the legacy manifest with the new one sorts every path into one of
four buckets: deleted, untracked, modified or unchanged.
"""

from __future__ import annotations

import hashlib
import os
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from pakforge.errors import InvalidAction, InvalidInput, IoFailure, UnknownPath

ALGORITHM = "sha256"
HEADER_PREFIX = "# manifest "
_CHUNK = 1 << 16

MOVED = "moved"
REMOVED = "removed"
ADDED = "added"
MERGED = "merged"
ACTIONS = (MOVED, REMOVED, ADDED, MERGED)

_ALLOWED = {
    "deleted": (MOVED, REMOVED),
    "untracked": (ADDED, REMOVED),
    "modified": (MERGED,),
}


@dataclass
class Manifest:
    root: Optional[str]
    entries: Dict[str, str] = field(default_factory=dict)
    algorithm: str = ALGORITHM
    warnings: List[str] = field(default_factory=list)

    def paths(self) -> List[str]:
        return sorted(self.entries)


@dataclass
class MigrationPlan:
    deleted: List[str] = field(default_factory=list)
    untracked: List[str] = field(default_factory=list)
    modified: List[str] = field(default_factory=list)
    unchanged: List[str] = field(default_factory=list)

    def category(self, path: str) -> Optional[str]:
        for name in ("deleted", "untracked", "modified", "unchanged"):
            if path in getattr(self, name):
                return name
        return None


CHECKLIST_ITEMS = (
    "All files showing as deleted that must be preserved have been moved into the new layout",
    "All files showing as deleted that are no longer needed have been removed",
    "All untracked files have been added",
    "All modified files have been merged",
    "The migration is complete and has been reviewed",
)


@dataclass
class CompletionChecklist:
    items: List[Tuple[str, bool]]
    outstanding: List[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return all(done for _, done in self.items)


@dataclass
class CopyResult:
    src: str
    dst: str
    copied: bool
    src_digest: str
    dst_digest: str

    @property
    def status(self) -> str:
        return "copied" if self.copied else "skipped"


def file_digest(path) -> str:
    h = hashlib.new(ALGORITHM)
    try:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(_CHUNK), b""):
                h.update(chunk)
    except OSError as exc:
        raise IoFailure(path, exc.strerror or exc) from exc
    return h.hexdigest()


def snapshot_tree(root) -> Manifest:
    """Hash every regular file below ``root``; symlinks are skipped, not followed."""
    root = Path(root)
    if not root.is_dir():
        raise IoFailure(root, "not a directory")
    entries: Dict[str, str] = {}
    warnings: List[str] = []

    def onerror(exc: OSError):
        raise IoFailure(exc.filename, exc.strerror or exc)

    for dirpath, dirnames, filenames in os.walk(root, onerror=onerror):
        rel_dir = Path(dirpath).relative_to(root)
        for name in list(dirnames):
            if os.path.islink(os.path.join(dirpath, name)):
                dirnames.remove(name)
                warnings.append(f"skipped symlink {(rel_dir / name).as_posix()}")
        for name in filenames:
            full = os.path.join(dirpath, name)
            rel = (rel_dir / name).as_posix()
            if os.path.islink(full):
                warnings.append(f"skipped symlink {rel}")
                continue
            if not os.path.isfile(full):
                warnings.append(f"skipped special file {rel}")
                continue
            entries[rel] = file_digest(full)
    return Manifest(root=str(root), entries=dict(sorted(entries.items())), warnings=warnings)


def serialize_manifest(manifest: Manifest) -> str:
    lines = [f"{HEADER_PREFIX}{manifest.algorithm}"]
    lines += [f"{manifest.entries[p]}\t{p}" for p in sorted(manifest.entries)]
    return "\n".join(lines) + "\n"


def parse_manifest(text: str, source: str = "<manifest>") -> Manifest:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(HEADER_PREFIX):
        raise InvalidInput(f"{source}: missing '{HEADER_PREFIX.strip()} <algorithm>' header")
    algorithm = lines[0][len(HEADER_PREFIX):].strip()
    entries: Dict[str, str] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        digest, tab, path = line.partition("\t")
        if not tab or not digest or not path:
            raise InvalidInput(f"{source}:{lineno}: expected 'digest<TAB>path'")
        if path.startswith("/") or path in entries:
            raise InvalidInput(f"{source}:{lineno}: bad or duplicate path {path!r}")
        entries[path] = digest
    return Manifest(root=None, entries=entries, algorithm=algorithm)


def load_manifest(path) -> Manifest:
    """Snapshot a directory, or read a serialized manifest file."""
    path = Path(path)
    if path.is_dir():
        return snapshot_tree(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(path, exc.strerror or exc) from exc
    return parse_manifest(text, str(path))


def diff_manifests(old: Manifest, new: Manifest) -> MigrationPlan:
    if old.algorithm != new.algorithm:
        raise InvalidInput(
            f"manifests use different digests ({old.algorithm} vs {new.algorithm})"
        )
    a, b = old.entries, new.entries
    common = a.keys() & b.keys()
    return MigrationPlan(
        deleted=sorted(a.keys() - b.keys()),
        untracked=sorted(b.keys() - a.keys()),
        modified=sorted(p for p in common if a[p] != b[p]),
        unchanged=sorted(p for p in common if a[p] == b[p]),
    )


def checklist(plan: MigrationPlan, resolved: Mapping[str, str], reviewed: bool = False) -> CompletionChecklist:
    """Evaluate the five completion conditions.

    ``resolved`` maps each handled path to the action taken. A deleted path
    counts as handled once it is either moved or removed, so the first two
    items hold together exactly when no deleted path is left unresolved.
    """
    for path, action in resolved.items():
        category = plan.category(path)
        if category is None or category == "unchanged":
            raise UnknownPath(f"{path!r} is not deleted, untracked or modified")
        if action not in _ALLOWED[category]:
            raise InvalidAction(
                f"{path!r} is {category}; expected one of {', '.join(_ALLOWED[category])}, got {action!r}"
            )

    open_deleted = [p for p in plan.deleted if p not in resolved]
    open_untracked = [p for p in plan.untracked if p not in resolved]
    open_modified = [p for p in plan.modified if p not in resolved]
    flags = [not open_deleted, not open_deleted, not open_untracked, not open_modified]
    flags.append(all(flags) and reviewed)
    outstanding = open_deleted + open_untracked + open_modified
    return CompletionChecklist(items=list(zip(CHECKLIST_ITEMS, flags)), outstanding=outstanding)


def copy_no_clobber(src, dst) -> CopyResult:
    """Copy ``src`` to ``dst`` unless something is already there.

    When ``dst`` is an existing directory the file is copied into it.
    """
    src, dst = Path(src), Path(dst)
    if not src.is_file():
        raise IoFailure(src, "source is not a regular file")
    if dst.is_dir():
        dst = dst / src.name
    src_digest = file_digest(src)
    try:
        dst.parent.mkdir(parents=True, exist_ok=True)
        with open(src, "rb") as fin, open(dst, "xb") as fout:
            shutil.copyfileobj(fin, fout)
    except FileExistsError:
        return CopyResult(str(src), str(dst), False, src_digest, file_digest(dst))
    except OSError as exc:
        raise IoFailure(dst, exc.strerror or exc) from exc
    shutil.copystat(src, dst)
    return CopyResult(str(src), str(dst), True, src_digest, src_digest)


def copy_tree_no_clobber(src, dst) -> List[CopyResult]:
    """Recursive :func:`copy_no_clobber`; ``dst`` mirrors the layout of ``src``."""
    manifest = snapshot_tree(src)
    src, dst = Path(src), Path(dst)
    return [copy_no_clobber(src / rel, dst / rel) for rel in manifest.paths()]


def format_plan(plan: MigrationPlan) -> str:
    out = []
    for name in ("deleted", "untracked", "modified", "unchanged"):
        paths = getattr(plan, name)
        out.append(f"[{name}] {len(paths)}")
        out += [f"  {p}" for p in paths]
    return "\n".join(out) + "\n"


def format_checklist(result: CompletionChecklist) -> str:
    lines = [f"[{'x' if done else ' '}] {i}. {text}" for i, (text, done) in enumerate(result.items, 1)]
    if result.outstanding:
        lines.append("outstanding:")
        lines += [f"  {p}" for p in result.outstanding]
    return "\n".join(lines) + "\n"


def parse_resolved(pairs: Iterable[Tuple[str, str]]) -> Dict[str, str]:
    resolved = {}
    for path, action in pairs:
        if action not in ACTIONS:
            raise InvalidAction(f"{action!r} is not one of {', '.join(ACTIONS)}")
        resolved[path] = action
    return resolved
