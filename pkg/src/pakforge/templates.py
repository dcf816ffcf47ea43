"""Level template bundles: rendering and no-clobber writing.

A bundle lives in ``bundles/<level>/``. Its ``manifest.txt`` lists one file
per line as ``condition TAB path-template`` (the condition may be empty);
the file body is stored under ``files/`` at :func:`source_name` of the path
template. Placeholders are ``{{ key }}`` in both paths and bodies.

Conditions are ``key=value``, ``key!=value`` or ``key*=text`` (contains)
over the level's answers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path, PurePosixPath
from typing import Dict, List, Mapping, Optional, Tuple

from pakforge import prompts
from pakforge.errors import (
    InvalidInput,
    IoFailure,
    RootExists,
    UnknownLevel,
    UnknownPlaceholder,
)
from pakforge.prompts import ProjectAnswers

OPEN, CLOSE = "{{", "}}"
BINARY_SUFFIXES = {".png", ".ico", ".jpg", ".gif"}

_TOKEN_RE = re.compile(r"\{\{(.*?)\}\}|\{\{|\}\}", re.DOTALL)
_KEY_RE = re.compile(r" ?([A-Za-z_][A-Za-z0-9_]*) ?\Z")
_PLACEHOLDER_NAME_RE = re.compile(r"\{\{ ?([A-Za-z_][A-Za-z0-9_]*) ?\}\}")
_CONDITION_RE = re.compile(r"([a-z_][a-z0-9_]*)(=|!=|\*=)(.+)\Z")


@dataclass(frozen=True)
class BundleEntry:
    path_template: str
    condition: Optional[str] = None

    def applies(self, values: Mapping[str, str]) -> bool:
        if not self.condition:
            return True
        key, op, operand = parse_condition(self.condition)
        value = values.get(key, "")
        if op == "=":
            return value == operand
        if op == "!=":
            return value != operand
        return operand in value


@dataclass
class TemplateBundle:
    level: str
    entries: List[BundleEntry]
    root: Path

    def source(self, entry: BundleEntry) -> Path:
        return self.root / "files" / source_name(entry.path_template)


@dataclass
class RenderedTree:
    root_name: str
    files: List[Tuple[str, bytes]]

    def paths(self) -> List[str]:
        return [path for path, _ in self.files]

    def content(self, path: str) -> bytes:
        return dict(self.files)[path]

    def text(self, path: str) -> str:
        return self.content(path).decode("utf-8")


@dataclass
class WriteReport:
    root: Path
    written: List[str] = field(default_factory=list)
    skipped_existing: List[str] = field(default_factory=list)


def _location(text: str, offset: int) -> str:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return f"line {line}, column {col}"


def render_template(text: str, context: Mapping[str, str], source: str = "<template>") -> str:
    """Replace every ``{{ key }}`` in ``text`` with ``context[key]``.

    A marker that does not form a known placeholder raises
    :class:`UnknownPlaceholder`; nothing is passed through silently.
    """
    pieces = []
    last = 0
    for match in _TOKEN_RE.finditer(text):
        inner = match.group(1)
        key_match = _KEY_RE.match(inner) if inner is not None else None
        key = key_match.group(1) if key_match else match.group(0)
        if key_match is None or key not in context:
            raise UnknownPlaceholder(key, f"{source}: {_location(text, match.start())}")
        pieces.append(text[last:match.start()])
        pieces.append(str(context[key]))
        last = match.end()
    pieces.append(text[last:])
    return "".join(pieces)


def source_name(path_template: str) -> str:
    """Storage name of a bundle file.

    Leading dots become ``dot-`` so package data tooling never drops
    hidden files, and placeholders become ``_key_``.

    >>> source_name(".github/workflows/{{ dir_name }}.yml")
    'dot-github/workflows/_dir_name_.yml'
    """
    plain = _PLACEHOLDER_NAME_RE.sub(lambda m: f"_{m.group(1)}_", path_template)
    return "/".join(
        "dot-" + part[1:] if part.startswith(".") else part for part in plain.split("/")
    )


def parse_condition(condition: str) -> Tuple[str, str, str]:
    match = _CONDITION_RE.match(condition)
    if match is None:
        raise InvalidInput(f"malformed bundle condition {condition!r}")
    return match.group(1), match.group(2), match.group(3)


def _bundles_root() -> Path:
    return Path(str(resources.files("pakforge") / "bundles"))


def parse_manifest(text: str, source: str = "manifest.txt") -> List[BundleEntry]:
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.count("\t") != 1:
            raise InvalidInput(f"{source}:{lineno}: expected 'condition TAB path'")
        condition, path = line.split("\t")
        if condition:
            parse_condition(condition)
        entries.append(BundleEntry(path_template=path, condition=condition or None))
    return entries


def load_bundle(level: str) -> TemplateBundle:
    if level not in prompts.LEVELS:
        raise UnknownLevel(level)
    root = _bundles_root() / level
    manifest = (root / "manifest.txt").read_text(encoding="utf-8")
    return TemplateBundle(level=level, entries=parse_manifest(manifest), root=root)


def _python_minors(low: str, high: str) -> List[str]:
    lo, hi = int(low.split(".")[1]), int(high.split(".")[1])
    return [f"3.{m}" for m in range(lo, hi + 1)]


def _toml_string(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _people(text: str) -> List[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


_MATRIX_JOB = """\
  test-{{ os }}-py{{ tag }}:
    name: Python {{ version }} on {{ os }}
    runs-on: {{ os }}
    steps:
      - name: Check out the repository
        uses: actions/checkout@v4
      - name: Set up Python {{ version }}
        uses: actions/setup-python@v5
        with:
          python-version: "{{ version }}"
      - name: Install the package and test requirements
        shell: bash
        run: |
          python -m pip install --upgrade pip
          python -m pip install -r requirements/pip.txt -r requirements/tests.txt
          python -m pip install . --no-deps
      - name: Run the tests with coverage
        shell: bash
        run: python -m pytest --cov --cov-report=xml
"""

_CODECOV_STEP = """\
      - name: Upload coverage to Codecov
        uses: codecov/codecov-action@v5
        with:
          files: coverage.xml
          use_oidc: true
"""

_GUI_STEP = """\
      - name: Start a virtual display for GUI tests
        run: |
          sudo apt-get install -y xvfb
          Xvfb :99 -screen 0 1280x1024x24 &
          echo "DISPLAY=:99" >> "$GITHUB_ENV"
"""

_PURE_BUILD_STEP = """\
      - name: Build the source distribution and wheel
        run: |
          python -m pip install build
          python -m build
"""

_C_BUILD_STEP = """\
      - name: Compile C extensions and build wheels
        run: |
          python -m pip install -r requirements/build.txt
          python -m build --sdist
          python -m cibuildwheel --output-dir dist
"""


def _matrix_jobs(versions: List[str]) -> str:
    jobs = []
    for os_name in ("ubuntu-latest", "macos-latest", "windows-latest"):
        for version in versions:
            ctx = {"os": os_name, "version": version, "tag": version.replace(".", "")}
            job = render_template(_MATRIX_JOB, ctx)
            if os_name == "ubuntu-latest" and version == versions[-1]:
                job += _CODECOV_STEP
            jobs.append(job)
    return "\n".join(jobs).rstrip("\n")


def build_context(answers: ProjectAnswers) -> Dict[str, str]:
    """Placeholder values for a level: the answers plus computed keys."""
    ctx = dict(answers.values)
    if answers.derived is not None:
        derived = answers.derived
        ctx.update(
            dir_name=derived.dir_name,
            import_name=derived.dir_name,
            src_path=derived.src_path,
            namespace=derived.namespace or "",
            package=derived.package,
        )
        holders = ctx.get("license_holders", ctx["contributors"])
        ctx["license_holders"] = holders
        ctx["authors_toml"] = ", ".join(
            "{ name = " + _toml_string(p) + " }" for p in _people(ctx["contributors"])
        )
        ctx["authors_rst"] = "\n".join(f"* {p}" for p in _people(ctx["contributors"]))
        ctx["env_name"] = derived.github_repo_name + "-env"
        ctx["repo_url"] = (
            f"https://github.com/{ctx['github_username_or_orgname']}/{derived.github_repo_name}"
        )
        ctx["description_toml"] = _toml_string(ctx.get("project_short_description", ""))
    if answers.level == "public":
        low = ctx["minimum_supported_python_version"]
        high = ctx["maximum_supported_python_version"]
        versions = _python_minors(low, high)
        # "<=3.13" would exclude 3.13.1, so bound by the next minor instead.
        ctx["requires_python"] = f">={low}, <3.{int(high.split('.')[1]) + 1}"
        ctx["python_versions"] = ", ".join(versions)
        ctx["python_classifiers"] = "\n".join(
            f'  "Programming Language :: Python :: {v}",' for v in versions
        )
        ctx["maintainer_toml"] = (
            "{ name = " + _toml_string(ctx["maintainer_name"])
            + ", email = " + _toml_string(ctx["maintainer_email"]) + " }"
        )
        ctx["keywords_toml"] = ", ".join(
            _toml_string(k) for k in _people(ctx["project_keywords"])
        )
        ctx["matrix_jobs"] = _matrix_jobs(versions)
        c_code = ctx["project_needs_c_code_compiled"] == "Yes"
        ctx["build_step"] = (_C_BUILD_STEP if c_code else _PURE_BUILD_STEP).rstrip("\n")
        ctx["build_requirements"] = "build\ncibuildwheel" if c_code else "build"
        gui = ctx["project_has_gui_tests"] == "Yes"
        ctx["gui_setup_step"] = _GUI_STEP.rstrip("\n") if gui else "      # No GUI tests."
    return ctx


def _root_name(answers: ProjectAnswers) -> str:
    if answers.level == "workspace":
        return answers["folder_name"]
    return answers.derived.github_repo_name


def _check_rendered_path(path: str, template: str) -> str:
    pure = PurePosixPath(path)
    if pure.is_absolute() or ".." in pure.parts or "" in path.split("/"):
        raise InvalidInput(f"template path {template!r} renders to unsafe path {path!r}")
    return path


def render_tree(level: str, answers: ProjectAnswers, bundle: Optional[TemplateBundle] = None) -> RenderedTree:
    """Render every applicable bundle entry into a sorted in-memory tree."""
    if level not in prompts.LEVELS:
        raise UnknownLevel(level)
    if answers.level != level:
        raise InvalidInput(f"answers are for level {answers.level!r}, not {level!r}")
    bundle = bundle or load_bundle(level)
    ctx = build_context(answers)
    files: Dict[str, bytes] = {}
    for entry in bundle.entries:
        if not entry.applies(answers.values):
            continue
        path = render_template(entry.path_template, ctx, f"manifest path {entry.path_template!r}")
        _check_rendered_path(path, entry.path_template)
        if path in files:
            raise InvalidInput(f"two bundle entries render to {path!r}")
        raw = bundle.source(entry).read_bytes()
        if PurePosixPath(path).suffix.lower() in BINARY_SUFFIXES:
            files[path] = raw
            continue
        text = raw.decode("utf-8").replace("\r\n", "\n")
        text = render_template(text, ctx, entry.path_template)
        if not text.endswith("\n"):
            text += "\n"
        files[path] = text.encode("utf-8")
    return RenderedTree(root_name=_root_name(answers), files=sorted(files.items()))


def write_tree(
    tree: RenderedTree,
    destination,
    no_clobber: bool = True,
    require_new_root: bool = False,
) -> WriteReport:
    """Write ``tree`` under ``destination/<root_name>``.

    With ``no_clobber`` an existing file is never opened for writing; it is
    reported in ``skipped_existing`` instead. ``require_new_root`` refuses
    to touch a root directory that already exists.
    """
    destination = Path(destination)
    if not destination.is_dir():
        raise IoFailure(destination, "destination directory does not exist")
    root = destination / tree.root_name
    if require_new_root and root.exists():
        raise RootExists(root)
    report = WriteReport(root=root)
    mode = "xb" if no_clobber else "wb"
    for rel, content in tree.files:
        target = root.joinpath(*rel.split("/"))
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            with open(target, mode) as fh:
                fh.write(content)
        except FileExistsError:
            if not no_clobber or target.is_dir():
                raise IoFailure(target, "a directory is in the way")
            report.skipped_existing.append(rel)
            continue
        except OSError as exc:
            raise IoFailure(target, exc) from exc
        report.written.append(rel)
    return report


def bundle_problems(level: str) -> List[str]:
    """Integrity checks for a shipped bundle; empty when the bundle is sound."""
    bundle = load_bundle(level)
    keys = {q.key for q in prompts.question_set(level)}
    problems = []
    for entry in bundle.entries:
        if entry.condition:
            key, _, _ = parse_condition(entry.condition)
            if key not in keys:
                problems.append(f"{entry.path_template}: condition uses unknown key {key!r}")
        src = bundle.source(entry)
        if not src.is_file():
            problems.append(f"{entry.path_template}: missing {src}")
            continue
        if PurePosixPath(entry.path_template).suffix.lower() in BINARY_SUFFIXES:
            continue
        raw = src.read_bytes()
        if b"\r\n" in raw:
            problems.append(f"{entry.path_template}: CRLF line endings")
        if not raw.endswith(b"\n"):
            problems.append(f"{entry.path_template}: no trailing newline")
    listed = {source_name(e.path_template) for e in bundle.entries}
    on_disk = {
        p.relative_to(bundle.root / "files").as_posix()
        for p in (bundle.root / "files").rglob("*")
        if p.is_file()
    }
    for extra in sorted(on_disk - listed):
        problems.append(f"files/{extra} is not listed in the manifest")
    return problems
