"""Project identifiers: validation, namespace splitting and derived names.

A project name is one or two dot-separated segments (``montypy`` or
``montypy.grail``). Each segment starts with a lowercase ASCII letter and
continues with lowercase letters, digits, hyphens or underscores.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from pakforge.errors import InvalidName

SEGMENT_RE = re.compile(r"[a-z][a-z0-9_-]*\Z")
DIR_SEGMENT_RE = re.compile(r"[a-z_][a-z0-9_]*\Z")


@dataclass(frozen=True)
class ProjectName:
    raw: str
    namespace: Optional[str]
    package: str

    @classmethod
    def parse(cls, raw: str) -> "ProjectName":
        namespace, package = split_namespace(raw)
        return cls(raw=raw, namespace=namespace, package=package)

    def __str__(self) -> str:
        return self.raw


@dataclass(frozen=True)
class DerivedNames:
    github_repo_name: str
    dist_name: str
    dir_name: str

    @property
    def namespace(self) -> Optional[str]:
        head, sep, _ = self.dir_name.partition(".")
        return head if sep else None

    @property
    def package(self) -> str:
        return self.dir_name.rpartition(".")[2]

    @property
    def src_path(self) -> str:
        """Source directory relative to ``src/``, one level per dotted segment."""
        return self.dir_name.replace(".", "/")


def _check_segment(segment: str, raw: str) -> None:
    if not segment:
        raise InvalidName(f"{raw!r}: empty name segment")
    if SEGMENT_RE.match(segment):
        return
    if not segment.isascii():
        reason = "only ASCII characters are allowed"
    elif any(c.isupper() for c in segment):
        reason = f"use lowercase letters ({segment.lower()!r} instead of {segment!r})"
    elif any(c.isspace() for c in segment):
        reason = "spaces are not allowed, use hyphens"
    elif not segment[0].isalpha():
        reason = "each segment must start with a letter"
    else:
        bad = sorted({c for c in segment if not (c.isalnum() or c in "-_")})
        reason = f"illegal characters {''.join(bad)!r}"
    raise InvalidName(f"{raw!r}: {reason}")


def split_namespace(project_name: str) -> Tuple[Optional[str], str]:
    """Split ``namespace.package`` into its parts.

    Returns ``(None, name)`` when there is no dot. Raises
    :class:`InvalidName` for more than one dot, empty parts or characters
    outside the segment grammar.
    """
    if not project_name:
        raise InvalidName("project name must not be empty")
    parts = project_name.split(".")
    if len(parts) > 2:
        raise InvalidName(f"{project_name!r}: at most one namespace level is supported")
    for part in parts:
        _check_segment(part, project_name)
    if len(parts) == 2:
        return parts[0], parts[1]
    return None, parts[0]


def normalize_dir_name(project_name: Union[ProjectName, str]) -> str:
    """Turn a project name into an importable directory name.

    >>> normalize_dir_name("my-science-package")
    'my_science_package'
    >>> normalize_dir_name("montypy.grail")
    'montypy.grail'
    """
    if isinstance(project_name, str):
        project_name = ProjectName.parse(project_name)
    segments = [project_name.package]
    if project_name.namespace is not None:
        segments.insert(0, project_name.namespace)
    return ".".join(s.replace("-", "_") for s in segments)


def validate_dir_name(dir_name: str) -> str:
    parts = dir_name.split(".")
    if len(parts) > 2 or not all(DIR_SEGMENT_RE.match(p) for p in parts):
        raise InvalidName(
            f"{dir_name!r}: package directory segments must be lowercase letters, "
            "digits and underscores, at most one dot"
        )
    return dir_name


def derive_defaults(project_name: Union[ProjectName, str]) -> DerivedNames:
    if isinstance(project_name, str):
        project_name = ProjectName.parse(project_name)
    return DerivedNames(
        github_repo_name=project_name.raw,
        dist_name=project_name.raw,
        dir_name=normalize_dir_name(project_name),
    )
