"""Command-line entry point.

Machine-readable output (plans, manifests, compiled changelog blocks) goes
to stdout; diagnostics go to stderr prefixed with ``pakforge:``.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pakforge import TOOL_NAME, __version__, migrate, news, prompts, release, templates
from pakforge.errors import EXIT_FAILURE, EXIT_USAGE, InvalidInput, IoFailure, PakforgeError

RELEASE_WORKFLOW = Path(".github/workflows/build-wheel-release-upload.yml")
DEFAULT_PREAMBLE = "=============\nRelease notes\n=============\n\n.. current developments\n"
_MAINTAINER_RE = re.compile(r"^\s*MAINTAINER_GITHUB_USERNAME:\s*['\"]?([^\s'\"]+)", re.MULTILINE)


def version_banner() -> str:
    return f"{TOOL_NAME} {__version__}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _info(message: str) -> None:
    sys.stderr.write(f"{TOOL_NAME}: {message}\n")


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(path, exc.strerror or exc) from exc


def _stdin_respond(prompt: str) -> str:
    sys.stdout.write(prompt)
    sys.stdout.flush()
    line = sys.stdin.readline()
    if not line:
        sys.stdout.write("\n")
        raise EOFError
    if not sys.stdin.isatty():
        # Keep piped transcripts readable: the typed newline is not echoed.
        sys.stdout.write("\n")
    return line.rstrip("\r\n")


# -- create ---------------------------------------------------------------

def cmd_create(args) -> int:
    provided = prompts.load_key_value_file(args.answers) if args.answers else {}
    user_defaults = prompts.load_user_defaults(args.config)
    respond = None if args.yes else _stdin_respond
    answers = prompts.resolve_answers(args.level, user_defaults, provided, respond)
    tree = templates.render_tree(args.level, answers)
    report = templates.write_tree(tree, args.dest, no_clobber=True, require_new_root=not args.merge)
    for rel in report.written:
        print(f"created {tree.root_name}/{rel}")
    for rel in report.skipped_existing:
        _info(f"kept existing {tree.root_name}/{rel}")
    return 0


# -- news / changelog -----------------------------------------------------

def cmd_news_add(args) -> int:
    path = news.create_news(args.news_dir, args.name, args.section, args.item)
    print(path)
    return 0


def cmd_news_check(args) -> int:
    text = sys.stdin.read() if args.paths_file == "-" else _read_text(args.paths_file)
    result = news.check_news_present(line for line in text.splitlines() if line.strip())
    if result:
        print(result.message)
        return 0
    _info(result.message)
    return EXIT_FAILURE


def cmd_news_clear(args) -> int:
    for name in news.clear_news(args.news_dir):
        print(f"removed {name}")
    return 0


def _load_changelog(path: Path) -> news.ChangelogDocument:
    if not path.exists():
        return news.ChangelogDocument(preamble=DEFAULT_PREAMBLE)
    return news.parse_changelog(_read_text(path))


def cmd_changelog_compile(args) -> int:
    path = Path(args.changelog)
    doc = news.compile_changelog(args.version, news.collect_news(args.news_dir), _load_changelog(path))
    if not args.dry_run:
        try:
            path.write_text(news.render_changelog(doc), encoding="utf-8", newline="\n")
        except OSError as exc:
            raise IoFailure(path, exc.strerror or exc) from exc
    sys.stdout.write(news.render_release(doc.releases[0]))
    return 0


# -- release --------------------------------------------------------------

def maintainer_from_workflow(project_dir) -> str:
    path = Path(project_dir) / RELEASE_WORKFLOW
    if not path.is_file():
        raise InvalidInput(f"no --maintainer given and {path} does not exist")
    match = _MAINTAINER_RE.search(_read_text(path))
    if match is None:
        raise InvalidInput(f"no MAINTAINER_GITHUB_USERNAME found in {path}")
    return match.group(1)


def cmd_release_plan(args) -> int:
    project = Path(args.project_dir)
    maintainer = args.maintainer or maintainer_from_workflow(project)
    tags: List[str] = []
    for chunk in args.tags or []:
        tags += [t for t in re.split(r"[\s,]+", chunk) if t]
    news_dir = project / "news"
    changelog = project / "CHANGELOG.rst"
    state = release.RepoState(
        maintainer=maintainer,
        existing_tags=tags,
        news_dir=news_dir if news_dir.is_dir() else None,
        changelog=news.parse_changelog(_read_text(changelog)) if changelog.is_file() else None,
    )
    plan = release.plan_release(args.tag, args.pusher, state, conda_forge=args.conda_forge)
    sys.stdout.write(release.format_plan(plan))
    return 0


# -- migrate --------------------------------------------------------------

def cmd_migrate_plan(args) -> int:
    old, new = migrate.load_manifest(args.old), migrate.load_manifest(args.new)
    for warning in old.warnings + new.warnings:
        _info(warning)
    if args.format == "manifest":
        sys.stdout.write(migrate.serialize_manifest(new))
        return 0
    sys.stdout.write(migrate.format_plan(migrate.diff_manifests(old, new)))
    return 0


def cmd_migrate_snapshot(args) -> int:
    manifest = migrate.snapshot_tree(args.root)
    for warning in manifest.warnings:
        _info(warning)
    sys.stdout.write(migrate.serialize_manifest(manifest))
    return 0


def _read_resolved(path) -> dict:
    pairs = []
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise InvalidInput(f"{path}:{lineno}: expected '<action> <path>'")
        pairs.append((parts[1].strip(), parts[0]))
    return migrate.parse_resolved(pairs)


def cmd_migrate_checklist(args) -> int:
    plan = migrate.diff_manifests(migrate.load_manifest(args.old), migrate.load_manifest(args.new))
    resolved = _read_resolved(args.resolved) if args.resolved else {}
    result = migrate.checklist(plan, resolved, reviewed=args.reviewed)
    sys.stdout.write(migrate.format_checklist(result))
    return 0 if result.complete else EXIT_FAILURE


def cmd_migrate_copy(args) -> int:
    if args.recursive:
        results = migrate.copy_tree_no_clobber(args.src, args.dst)
    else:
        results = [migrate.copy_no_clobber(args.src, args.dst)]
    for r in results:
        if r.copied:
            print(f"copied {r.src} -> {r.dst}")
        else:
            same = "identical" if r.src_digest == r.dst_digest else "differs"
            print(f"skipped {r.dst} ({same}) src={r.src_digest} dst={r.dst_digest}")
    return 0


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=TOOL_NAME, description="Scaffold and maintain shareable Python packages.")
    parser.add_argument("--version", action="version", version=version_banner())
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("create", help="generate a workspace, system or public project")
    p.add_argument("level", choices=prompts.LEVELS)
    p.add_argument("--answers", metavar="FILE", help="key = value file answering questions up front")
    p.add_argument("--config", metavar="FILE", help="user-defaults file (default: per-user config)")
    p.add_argument("--yes", action="store_true", help="never prompt; use defaults for anything unanswered")
    p.add_argument("--dest", default=".", help="directory in which the project folder is created")
    p.add_argument("--merge", action="store_true", help="add missing files to an existing project folder")
    p.set_defaults(func=cmd_create)

    p = sub.add_parser("news", help="news fragments")
    nsub = p.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    nsub.required = True
    q = nsub.add_parser("add", help="write a new fragment")
    q.add_argument("name")
    q.add_argument("--section", required=True, choices=news.SECTIONS)
    q.add_argument("--item", required=True)
    q.add_argument("--news-dir", default="news")
    q.set_defaults(func=cmd_news_add)
    q = nsub.add_parser("check", help="fail unless the changed paths include a news fragment")
    q.add_argument("paths_file", metavar="CHANGED_PATHS_FILE", help="one path per line, '-' for stdin")
    q.set_defaults(func=cmd_news_check)
    q = nsub.add_parser("clear", help="delete every fragment except the template")
    q.add_argument("--news-dir", default="news")
    q.set_defaults(func=cmd_news_clear)

    p = sub.add_parser("changelog", help="changelog maintenance")
    csub = p.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    csub.required = True
    q = csub.add_parser("compile", help="fold news fragments into a new release block")
    q.add_argument("version")
    q.add_argument("--news-dir", default="news")
    q.add_argument("--changelog", default="CHANGELOG.rst")
    q.add_argument("--dry-run", action="store_true", help="print the block without writing")
    q.set_defaults(func=cmd_changelog_compile)

    p = sub.add_parser("release", help="release planning")
    rsub = p.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    rsub.required = True
    q = rsub.add_parser("plan", help="dry-run the release triggered by pushing TAG")
    q.add_argument("tag")
    q.add_argument("--pusher", required=True)
    q.add_argument("--maintainer", help="default: read from the release workflow")
    q.add_argument("--tags", action="append", metavar="TAGS", help="existing tags, comma separated")
    q.add_argument("--project-dir", default=".")
    q.add_argument("--conda-forge", action="store_true", help="add the conda-forge checklist step")
    q.set_defaults(func=cmd_release_plan)

    p = sub.add_parser("migrate", help="legacy project migration")
    msub = p.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    msub.required = True
    q = msub.add_parser("plan", help="triage old vs new tree")
    q.add_argument("--old", required=True, metavar="DIR_OR_MANIFEST")
    q.add_argument("--new", required=True, metavar="DIR_OR_MANIFEST")
    q.add_argument("--format", choices=("text", "manifest"), default="text")
    q.set_defaults(func=cmd_migrate_plan)
    q = msub.add_parser("snapshot", help="print the manifest of a directory")
    q.add_argument("root")
    q.set_defaults(func=cmd_migrate_snapshot)
    q = msub.add_parser("checklist", help="evaluate the completion conditions")
    q.add_argument("--old", required=True, metavar="DIR_OR_MANIFEST")
    q.add_argument("--new", required=True, metavar="DIR_OR_MANIFEST")
    q.add_argument("--resolved", metavar="FILE", help="lines of '<action> <path>'")
    q.add_argument("--reviewed", action="store_true")
    q.set_defaults(func=cmd_migrate_checklist)
    q = msub.add_parser("copy", help="copy without overwriting existing files")
    q.add_argument("src")
    q.add_argument("dst")
    q.add_argument("-r", "--recursive", action="store_true")
    q.set_defaults(func=cmd_migrate_copy)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except PakforgeError as exc:
        _info(f"error: {exc}")
        return exc.exit_code
    except KeyboardInterrupt:
        _info("interrupted")
        return EXIT_FAILURE
