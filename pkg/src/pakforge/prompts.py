"""Question sets per level and layered answer resolution.

Answers are resolved per question, first match wins:

1. a value provided up front (``--answers`` file),
2. a non-blank interactive response,
3. the user-defaults config file,
4. the built-in default, recomputed from ``project_name`` for derived
   questions.
"""

from __future__ import annotations

import os
import re
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from pakforge import names
from pakforge.errors import (
    ConfigParseError,
    InvalidName,
    MissingAnswer,
    UnknownLevel,
    ValidationFailed,
)

LEVELS = ("workspace", "system", "public")
CONFIG_ENV_VAR = "FORGE_CONFIG_DIR"
CONFIG_FILE_NAME = "defaults.cfg"

# Re-asks for a blank response when the question has no default at all.
MAX_ATTEMPTS = 3

TEXT = "text"
CHOICE = "choice"

Respond = Callable[[str], str]


@dataclass(frozen=True)
class Question:
    key: str
    index: int
    kind: str = TEXT
    default: Union[str, int, None] = None
    choices: Tuple[str, ...] = ()
    derived_from: Optional[str] = None

    def builtin_default(self, resolved: Mapping[str, str]) -> Optional[str]:
        if self.kind == CHOICE:
            return self.choices[self.default - 1]
        if self.derived_from and self.derived_from in resolved:
            return _derive(self.key, resolved[self.derived_from])
        return self.default


@dataclass
class ProjectAnswers:
    level: str
    values: Dict[str, str]
    derived: Optional[names.DerivedNames] = field(default=None)

    def __getitem__(self, key: str) -> str:
        return self.values[key]


def _derive(key: str, source: str) -> Optional[str]:
    if key == "license_holders":
        return source
    try:
        derived = names.derive_defaults(source)
    except InvalidName:
        return None
    return {
        "github_repo_name": derived.github_repo_name,
        "conda_pypi_package_dist_name": derived.dist_name,
        "package_dir_name": derived.dir_name,
    }[key]


def _text(key, default=None, derived_from=None):
    return (key, dict(kind=TEXT, default=default, derived_from=derived_from))


def _choice(key, options, default=1):
    return (key, dict(kind=CHOICE, default=default, choices=tuple(options)))


# Identity fields (people, organizations) ship without a built-in value;
# set them once in the user-defaults config.
_QUESTIONS = {
    "workspace": [
        _text("folder_name", "workspace-folder"),
    ],
    "system": [
        _text("project_name", "my-package"),
        _text("github_username_or_orgname"),
        _text("github_repo_name", derived_from="project_name"),
        _text("conda_pypi_package_dist_name", derived_from="project_name"),
        _text("package_dir_name", derived_from="project_name"),
        _text("contributors"),
    ],
    "public": [
        _text("maintainer_name"),
        _text("maintainer_email"),
        _text("maintainer_github_username"),
        _text("contributors"),
        _text("license_holders", derived_from="contributors"),
        _text("project_name", "my-package"),
        _text("github_username_or_orgname"),
        _text("github_repo_name", derived_from="project_name"),
        _text("conda_pypi_package_dist_name", derived_from="project_name"),
        _text("package_dir_name", derived_from="project_name"),
        _text("project_short_description", "Python package for doing science."),
        _text("project_keywords", "science"),
        _text("minimum_supported_python_version", "3.11"),
        _text("maximum_supported_python_version", "3.13"),
        _choice("project_needs_c_code_compiled", ["No", "Yes"]),
        _choice("project_has_gui_tests", ["No", "Yes"]),
    ],
}


def question_set(level: str) -> List[Question]:
    if level not in _QUESTIONS:
        raise UnknownLevel(level)
    return [
        Question(key=key, index=i, **spec)
        for i, (key, spec) in enumerate(_QUESTIONS[level], start=1)
    ]


def format_prompt(question: Question, total: int, default: Optional[str]) -> str:
    """Render the prompt exactly as shown to an interactive user.

    >>> q = Question("folder_name", 1, default="workspace-folder")
    >>> format_prompt(q, 1, "workspace-folder")
    '[1/1] folder_name (workspace-folder): '
    """
    head = f"[{question.index}/{total}]"
    if question.kind == CHOICE:
        n = len(question.choices)
        lines = [f"{head} Select {question.key}"]
        lines += [f"  {i} - {opt}" for i, opt in enumerate(question.choices, start=1)]
        chosen = question.choices.index(default) + 1
        lines.append(f"  Choose from [{'/'.join(str(i) for i in range(1, n + 1))}] ({chosen}): ")
        return "\n".join(lines)
    if default is None:
        return f"{head} {question.key}: "
    return f"{head} {question.key} ({default}): "


def _canonical_choice(question: Question, value: str) -> str:
    value = value.strip()
    if value.isdigit() and 1 <= int(value) <= len(question.choices):
        return question.choices[int(value) - 1]
    for option in question.choices:
        if option.lower() == value.lower():
            return option
    raise ValidationFailed(
        question.key, f"{value!r} is not one of {', '.join(question.choices)}"
    )


def _ask(question: Question, total: int, default: Optional[str], respond: Respond) -> Optional[str]:
    prompt = format_prompt(question, total, default)
    for _ in range(MAX_ATTEMPTS):
        try:
            response = respond(prompt)
        except EOFError:
            return None
        response = (response or "").strip()
        if response or default is not None:
            return response or None
    return None


def resolve_answers(
    level: str,
    user_defaults: Optional[Mapping[str, str]] = None,
    provided: Optional[Mapping[str, str]] = None,
    respond: Optional[Respond] = None,
    questions: Optional[Sequence[Question]] = None,
) -> ProjectAnswers:
    """Resolve every question of ``level`` and validate the result.

    Args:
        level: ``workspace``, ``system`` or ``public``.
        user_defaults: Values from the user-defaults config file.
        provided: Pre-supplied answers; these are never prompted for.
        respond: Interactive callback receiving the prompt text and returning
            the raw response. ``None`` runs non-interactively.
        questions: Replacement question list, mainly for tests.

    Raises:
        MissingAnswer: A question has no value in any layer.
        ValidationFailed: A resolved value is malformed.
    """
    if questions is None:
        questions = question_set(level)
    user_defaults = dict(user_defaults or {})
    provided = dict(provided or {})
    keys = {q.key for q in questions}
    for key in provided:
        if key not in keys:
            raise ValidationFailed(key, f"not a question of level {level!r}")

    total = len(questions)
    values: Dict[str, str] = {}
    for question in questions:
        default = _nonblank(user_defaults.get(question.key))
        if default is None:
            default = question.builtin_default(values)
        if question.kind == CHOICE and default is not None:
            default = _canonical_choice(question, default)

        value = _nonblank(provided.get(question.key))
        if value is None and respond is not None:
            value = _ask(question, total, default, respond)
        if value is None:
            value = default
        if value is None:
            raise MissingAnswer(question.key)
        if question.kind == CHOICE:
            value = _canonical_choice(question, value)
        if question.key == "project_name":
            # Later defaults are derived from it, so fail here with the real reason.
            _check_project_name(value)
        values[question.key] = value

    return validate_answers(level, values)


def _nonblank(value: Optional[str]) -> Optional[str]:
    if value is None:
        return None
    value = value.strip()
    return value or None


_PY_VERSION_RE = re.compile(r"3\.(0|[1-9][0-9]*)\Z")
_UNSAFE_DIR_RE = re.compile(r"[/\\\x00]")


def _check_dir_segment(key: str, value: str) -> None:
    if value in (".", "..") or _UNSAFE_DIR_RE.search(value):
        raise ValidationFailed(key, f"{value!r} is not usable as a directory name")


def _check_project_name(value: str) -> None:
    try:
        names.ProjectName.parse(value)
    except InvalidName as exc:
        raise ValidationFailed("project_name", str(exc)) from exc


def validate_answers(level: str, values: Dict[str, str]) -> ProjectAnswers:
    for key, value in values.items():
        if not value:
            raise MissingAnswer(key)
        if "{{" in value or "}}" in value:
            raise ValidationFailed(key, "must not contain '{{' or '}}'")

    derived = None
    if level == "workspace":
        _check_dir_segment("folder_name", values["folder_name"])
    else:
        _check_project_name(values["project_name"])
        try:
            names.validate_dir_name(values["package_dir_name"])
        except InvalidName as exc:
            raise ValidationFailed("package_dir_name", str(exc)) from exc
        _check_dir_segment("github_repo_name", values["github_repo_name"])
        derived = names.DerivedNames(
            github_repo_name=values["github_repo_name"],
            dist_name=values["conda_pypi_package_dist_name"],
            dir_name=values["package_dir_name"],
        )
    if level == "public":
        low = values["minimum_supported_python_version"]
        high = values["maximum_supported_python_version"]
        for key, version in (("minimum_supported_python_version", low),
                             ("maximum_supported_python_version", high)):
            if not _PY_VERSION_RE.match(version):
                raise ValidationFailed(key, f"{version!r} is not of the form 3.N")
        if int(low.split(".")[1]) > int(high.split(".")[1]):
            raise ValidationFailed(
                "maximum_supported_python_version", f"{high} is older than {low}"
            )
    return ProjectAnswers(level=level, values=dict(values), derived=derived)


_LINE_RE = re.compile(r"([^\s=#][^\s=]*)[ \t]*=[ \t]*(.*)\Z")


def parse_key_value(text: str, source: str = "<string>") -> Dict[str, str]:
    """Parse ``key = value`` lines. ``#`` at column 1 starts a comment."""
    result: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip()
        if not line or line.startswith("#"):
            continue
        match = _LINE_RE.match(line.lstrip())
        if match is None:
            if "=" not in line:
                reason = "expected 'key = value'"
            else:
                reason = "missing key before '='"
            raise ConfigParseError(source, lineno, reason)
        result[match.group(1)] = match.group(2)
    return result


def load_key_value_file(path) -> Dict[str, str]:
    path = Path(path)
    return parse_key_value(path.read_text(encoding="utf-8"), str(path))


def default_config_path() -> Path:
    override = os.environ.get(CONFIG_ENV_VAR)
    if override:
        return Path(override) / CONFIG_FILE_NAME
    if sys.platform == "win32" and os.environ.get("APPDATA"):
        base = Path(os.environ["APPDATA"])
    else:
        base = Path(os.environ.get("XDG_CONFIG_HOME") or Path.home() / ".config")
    return base / "pakforge" / CONFIG_FILE_NAME


def load_user_defaults(config_path=None) -> Dict[str, str]:
    """Read the user-defaults config; a missing file yields ``{}``."""
    path = Path(config_path) if config_path is not None else default_config_path()
    if not path.is_file():
        return {}
    return load_key_value_file(path)


def replace_question(questions: Sequence[Question], key: str, **changes) -> List[Question]:
    return [replace(q, **changes) if q.key == key else q for q in questions]
