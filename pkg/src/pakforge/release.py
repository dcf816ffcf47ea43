"""Release tags and dry-run release plans.

Tags are ``MAJOR.MINOR.PATCH`` with an optional ``-rc.N`` suffix marking a
release candidate. A plan lists what the release workflows would do for a
pushed tag without doing any of it.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Union

from pakforge import news
from pakforge.errors import InvalidTag, NonMonotonicTag, Unauthorized

TAG_RE = re.compile(
    r"(0|[1-9][0-9]*)\.(0|[1-9][0-9]*)\.(0|[1-9][0-9]*)(?:-rc\.(0|[1-9][0-9]*))?\Z"
)


@functools.total_ordering
@dataclass(frozen=True)
class ReleaseTag:
    major: int
    minor: int
    patch: int
    rc: Optional[int] = None

    def __post_init__(self):
        for name in ("major", "minor", "patch"):
            if getattr(self, name) < 0:
                raise InvalidTag(f"{name} must be non-negative")
        if self.rc is not None and self.rc < 0:
            raise InvalidTag("rc number must be non-negative")

    @property
    def prerelease(self) -> bool:
        return self.rc is not None

    @property
    def base(self) -> str:
        return f"{self.major}.{self.minor}.{self.patch}"

    def sort_key(self):
        # A final release sorts after every candidate of the same version.
        rc_rank = (0, self.rc) if self.rc is not None else (1, 0)
        return (self.major, self.minor, self.patch, rc_rank)

    def __lt__(self, other: "ReleaseTag") -> bool:
        if not isinstance(other, ReleaseTag):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.rc is None:
            return self.base
        return f"{self.base}-rc.{self.rc}"


def _why_invalid(text: str) -> str:
    if text[:1] in "vV":
        return "drop the 'v' prefix"
    core = text.split("-", 1)[0]
    parts = core.split(".")
    if len(parts) != 3:
        return "use three numbers separated by two periods"
    if any(p.isdigit() and len(p) > 1 and p.startswith("0") for p in parts):
        return "numbers must not have leading zeros"
    if "-" in text:
        return "a release candidate suffix must look like '-rc.N'"
    return "expected MAJOR.MINOR.PATCH or MAJOR.MINOR.PATCH-rc.N"


def parse_tag(text: str) -> ReleaseTag:
    """Parse a release tag.

    >>> parse_tag("0.1.0-rc.0")
    ReleaseTag(major=0, minor=1, patch=0, rc=0)
    """
    match = TAG_RE.match(text) if isinstance(text, str) else None
    if match is None:
        raise InvalidTag(f"{text!r}: {_why_invalid(str(text))}")
    major, minor, patch, rc = match.groups()
    return ReleaseTag(int(major), int(minor), int(patch), None if rc is None else int(rc))


def is_valid_tag(text: str) -> bool:
    return TAG_RE.match(text) is not None


def compare_tags(a: ReleaseTag, b: ReleaseTag) -> int:
    """Return -1, 0 or 1 as ``a`` sorts before, equal to or after ``b``."""
    ka, kb = a.sort_key(), b.sort_key()
    return (ka > kb) - (ka < kb)


def authorize(tag_pusher: str, maintainer: str) -> bool:
    """Only the maintainer may release; the match is exact and case-sensitive."""
    if not maintainer:
        raise ValueError("maintainer must not be empty")
    return bool(tag_pusher) and tag_pusher == maintainer


PUBLISH_GITHUB = "publish-github-release"
DEPLOY_DOCS = "deploy-docs"
UPLOAD_INDEX = "upload-package-index"
CONDA_FORGE = "emit-conda-forge-checklist"


@dataclass(frozen=True)
class Step:
    name: str
    detail: str
    prerelease: bool = False

    def describe(self) -> str:
        marker = " [pre-release]" if self.prerelease else ""
        return f"{self.name}{marker}: {self.detail}"


@dataclass
class RepoState:
    maintainer: str
    existing_tags: List[str] = field(default_factory=list)
    news_dir: Optional[Union[str, Path]] = None
    changelog: Optional[news.ChangelogDocument] = None


@dataclass
class ReleasePlan:
    tag: ReleaseTag
    prerelease: bool
    steps: List[Step]
    changelog_preview: str = ""


def latest_tag(tags: Iterable[str]) -> Optional[ReleaseTag]:
    parsed = [parse_tag(t) for t in tags]
    return max(parsed) if parsed else None


def plan_release(tag_text: str, pusher: str, repo_state: RepoState, conda_forge: bool = False) -> ReleasePlan:
    """Work out the release steps a pushed tag would trigger.

    Raises:
        InvalidTag: ``tag_text`` is not a release tag.
        Unauthorized: ``pusher`` is not the maintainer.
        NonMonotonicTag: the tag does not exceed every existing tag.
        DuplicateVersion: a final release already has a changelog block.
    """
    tag = parse_tag(tag_text)
    if not authorize(pusher, repo_state.maintainer):
        raise Unauthorized(
            f"{pusher or '<nobody>'} may not release; only {repo_state.maintainer} is authorized"
        )
    newest = latest_tag(repo_state.existing_tags)
    if newest is not None and tag <= newest:
        raise NonMonotonicTag(str(tag), str(newest))

    pre = tag.prerelease
    if pre:
        preview = ""
        notes = "changelog deferred to the final release"
    else:
        fragments = news.collect_news(repo_state.news_dir) if repo_state.news_dir else []
        doc = news.compile_changelog(str(tag), fragments, repo_state.changelog)
        preview = news.render_release(doc.releases[0])
        notes = "release notes from CHANGELOG.rst"
    steps = [
        Step(PUBLISH_GITHUB, f"create GitHub release {tag} ({notes})", pre),
        Step(DEPLOY_DOCS, f"build and deploy documentation for version {tag}", pre),
        Step(UPLOAD_INDEX, f"build and upload {tag} to PyPI", pre),
    ]
    if conda_forge:
        steps.append(
            Step(CONDA_FORGE, f"update the conda-forge feedstock recipe to {tag.base}", pre)
        )
    return ReleasePlan(tag=tag, prerelease=pre, steps=steps, changelog_preview=preview)


def format_plan(plan: ReleasePlan) -> str:
    lines = [f"TAG {plan.tag}", f"PRERELEASE {'true' if plan.prerelease else 'false'}"]
    lines += [f"STEP {i}: {step.describe()}" for i, step in enumerate(plan.steps, start=1)]
    if plan.changelog_preview:
        lines.append("CHANGELOG")
        lines.append(plan.changelog_preview.rstrip("\n"))
    return "\n".join(lines) + "\n"
