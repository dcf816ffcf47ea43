"""News fragments and the changelog they compile into.

A fragment is a small reStructuredText file in ``news/`` with one bold
header per section (``**Added:**``) followed by ``* item`` bullets. At
release time all fragments are merged, in filename order, into a new block
at the top of ``CHANGELOG.rst``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath
from typing import Dict, Iterable, List, Optional, Sequence

from pakforge.errors import (
    AlreadyExists,
    DuplicateVersion,
    FragmentParseError,
    InvalidInput,
    InvalidSection,
)

SECTIONS = ("Added", "Changed", "Deprecated", "Removed", "Fixed", "Security")
PLACEHOLDER = "<news-item>"
TEMPLATE_NAME = "TEMPLATE.rst"
NO_CHANGES = "No significant changes."

_HEADER_RE = re.compile(r"\*\*([A-Za-z]+): ?\*\*\s*\Z")
_ITEM_RE = re.compile(r" ?\* (.*)\Z")
_STEM_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9._-]*\Z")


@dataclass
class NewsFragment:
    source_name: str
    sections: Dict[str, List[str]] = field(default_factory=dict)

    def items(self) -> List[str]:
        return [item for items in self.sections.values() for item in items]


@dataclass
class ReleaseNotes:
    version: str
    sections: Dict[str, List[str]] = field(default_factory=dict)
    # Body text kept verbatim when an existing block does not follow the
    # generated grammar.
    raw: Optional[str] = None


@dataclass
class ChangelogDocument:
    preamble: str = ""
    releases: List[ReleaseNotes] = field(default_factory=list)

    def versions(self) -> List[str]:
        return [r.version for r in self.releases]


@dataclass
class NewsCheck:
    passed: bool
    message: str

    def __bool__(self) -> bool:
        return self.passed


def _ordered(sections: Dict[str, List[str]]) -> Dict[str, List[str]]:
    return {name: list(sections[name]) for name in SECTIONS if sections.get(name)}


def render_fragment(sections: Dict[str, List[str]]) -> str:
    """Fragment text listing every section; empty sections keep the placeholder."""
    blocks = []
    for name in SECTIONS:
        items = sections.get(name) or [PLACEHOLDER]
        bullets = "\n".join(f"* {item}" for item in items)
        blocks.append(f"**{name}:**\n\n{bullets}\n")
    return "\n".join(blocks)


def parse_fragment(text: str, source: str = "<fragment>") -> NewsFragment:
    sections: Dict[str, List[str]] = {}
    current: Optional[str] = None
    last_item: Optional[List[str]] = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            last_item = None
            continue
        header = _HEADER_RE.match(line)
        if header:
            name = header.group(1)
            if name not in SECTIONS:
                raise FragmentParseError(source, lineno, f"unknown section {name!r}")
            current = name
            sections.setdefault(name, [])
            last_item = None
            continue
        item = _ITEM_RE.match(line)
        if item:
            if current is None:
                raise FragmentParseError(source, lineno, "item before any section header")
            last_item = [item.group(1).strip()]
            sections[current].append(last_item)
            continue
        if line[:1].isspace() and last_item is not None:
            last_item.append(line.strip())
            continue
        raise FragmentParseError(source, lineno, f"unexpected line {line!r}")

    cleaned: Dict[str, List[str]] = {}
    for name, items in sections.items():
        texts = [" ".join(parts) for parts in items]
        texts = [t for t in texts if t != PLACEHOLDER]
        for t in texts:
            if PLACEHOLDER in t:
                raise FragmentParseError(source, 0, f"unfilled {PLACEHOLDER} in {t!r}")
        if texts:
            cleaned[name] = texts
    stem = PurePosixPath(source).stem
    return NewsFragment(source_name=stem, sections=_ordered(cleaned))


def create_news(news_dir, name: str, section: str, item: str) -> Path:
    """Write ``news/<name>.rst`` holding ``item`` under ``section``."""
    if section not in SECTIONS:
        raise InvalidSection(f"{section!r} is not one of {', '.join(SECTIONS)}")
    if name.endswith(".rst"):
        name = name[:-4]
    if not _STEM_RE.match(name) or name == "TEMPLATE":
        raise InvalidInput(f"{name!r} is not a valid news file name")
    item = " ".join(item.split())
    if not item or PLACEHOLDER in item:
        raise InvalidInput("the news item must be non-empty text")
    news_dir = Path(news_dir)
    news_dir.mkdir(parents=True, exist_ok=True)
    path = news_dir / f"{name}.rst"
    try:
        with open(path, "x", encoding="utf-8", newline="\n") as fh:
            fh.write(render_fragment({section: [item]}))
    except FileExistsError:
        raise AlreadyExists(f"{path} already exists") from None
    return path


def fragment_paths(news_dir) -> List[Path]:
    news_dir = Path(news_dir)
    return sorted(
        (p for p in news_dir.glob("*.rst") if p.name != TEMPLATE_NAME and p.is_file()),
        key=lambda p: p.name,
    )


def collect_news(news_dir) -> List[NewsFragment]:
    return [
        parse_fragment(p.read_text(encoding="utf-8"), p.name) for p in fragment_paths(news_dir)
    ]


def clear_news(news_dir) -> List[str]:
    """Delete every fragment except the template; return the removed names."""
    removed = []
    for path in fragment_paths(news_dir):
        path.unlink()
        removed.append(path.name)
    return removed


def render_release(release: ReleaseNotes) -> str:
    head = f"{release.version}\n{'=' * len(release.version)}\n\n"
    if release.raw is not None:
        return head + release.raw
    if not release.sections:
        return head + NO_CHANGES + "\n"
    blocks = []
    for name, items in _ordered(release.sections).items():
        bullets = "\n".join(f" * {item}" for item in items)
        blocks.append(f"**{name}: **\n\n{bullets}\n")
    return head + "\n".join(blocks)


def render_changelog(doc: ChangelogDocument) -> str:
    blocks = "\n".join(render_release(r) for r in doc.releases)
    preamble = doc.preamble.rstrip("\n")
    if not preamble:
        return blocks
    if not blocks:
        return preamble + "\n"
    return preamble + "\n\n" + blocks


def _is_heading(lines: Sequence[str], i: int) -> bool:
    from pakforge.release import is_valid_tag

    return (
        i + 1 < len(lines)
        and is_valid_tag(lines[i])
        and lines[i + 1] == "=" * len(lines[i])
        and (i == 0 or not lines[i - 1].strip())
    )


def _parse_body(body: List[str]) -> ReleaseNotes:
    while body and not body[0].strip():
        body = body[1:]
    while body and not body[-1].strip():
        body = body[:-1]
    text = "\n".join(body) + "\n" if body else ""
    if text.strip() == NO_CHANGES:
        return ReleaseNotes(version="", sections={})
    try:
        frag = parse_fragment(text)
    except FragmentParseError:
        return ReleaseNotes(version="", raw=text)
    notes = ReleaseNotes(version="", sections=frag.sections)
    if not frag.sections or render_release(notes).split("\n\n", 1)[1] != text:
        return ReleaseNotes(version="", raw=text)
    return notes


def parse_changelog(text: str) -> ChangelogDocument:
    lines = text.splitlines()
    starts = [i for i in range(len(lines)) if _is_heading(lines, i)]
    if not starts:
        return ChangelogDocument(preamble=text.rstrip("\n") + "\n" if text.strip() else "")
    preamble = "\n".join(lines[: starts[0]]).rstrip("\n")
    releases = []
    for n, start in enumerate(starts):
        end = starts[n + 1] if n + 1 < len(starts) else len(lines)
        notes = _parse_body(lines[start + 2 : end])
        notes.version = lines[start]
        releases.append(notes)
    return ChangelogDocument(preamble=preamble + "\n" if preamble else "", releases=releases)


def compile_changelog(
    version: str, fragments: Iterable[NewsFragment], existing: Optional[ChangelogDocument] = None
) -> ChangelogDocument:
    """Return a new document with a ``version`` block built from ``fragments``.

    Items keep fragment order within each section; sections follow the
    canonical order. ``existing`` is not modified.
    """
    from pakforge.release import parse_tag

    parse_tag(version)
    existing = existing or ChangelogDocument()
    if version in existing.versions():
        raise DuplicateVersion(f"{version} is already in the changelog")
    merged: Dict[str, List[str]] = {}
    for fragment in fragments:
        for name, items in fragment.sections.items():
            merged.setdefault(name, []).extend(items)
    release = ReleaseNotes(version=version, sections=_ordered(merged))
    return ChangelogDocument(preamble=existing.preamble, releases=[release, *existing.releases])


def check_news_present(changed_paths: Iterable[str]) -> NewsCheck:
    found = []
    for raw in changed_paths:
        path = PurePosixPath(raw.strip().replace("\\", "/"))
        parts = [p for p in path.parts if p != "."]
        if len(parts) == 2 and parts[0] == "news" and parts[1].endswith(".rst"):
            if parts[1] != TEMPLATE_NAME:
                found.append("/".join(parts))
    if found:
        return NewsCheck(True, f"news item found: {', '.join(found)}")
    return NewsCheck(
        False,
        "no news item found; copy news/TEMPLATE.rst to news/<branch-name>.rst "
        "and describe the change",
    )
