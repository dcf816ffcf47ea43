"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import hashlib
import itertools
import random
import textwrap
import time

import pytest

from pakforge import migrate, news, prompts, release, templates
from pakforge.errors import InvalidTag, MissingAnswer, Unauthorized
from pakforge.migrate import Manifest

from conftest import GROUP_DEFAULTS, PUBLIC_ANSWERS, SYSTEM_ANSWERS, walk_files


def verdict(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


# -- 1. golden trees ------------------------------------------------------

WORKSPACE_PATHS = {
    "CODE-OF-CONDUCT.rst",
    "README.md",
    "requirements.txt",
    "shared_functions.py",
    ".gitignore",
    ".pre-commit-config.yaml",
    "proj-one/__init__.py",
    "proj-one/proj_one_code.py",
    "tests/__init__.py",
    "tests/test_shared_functions.py",
}

SYSTEM_PATHS = {
    "CODE-OF-CONDUCT.rst",
    "LICENSE.rst",
    "README.md",
    "pyproject.toml",
    ".pre-commit-config.yaml",
    ".flake8",
    ".gitignore",
    ".github/ISSUE_TEMPLATE/bug_feature.md",
    ".github/workflows/tests-on-pr.yml",
    "requirements/conda.txt",
    "requirements/pip.txt",
    "requirements/tests.txt",
    "src/my_science_package/__init__.py",
    "src/my_science_package/functions.py",
    "tests/test_functions.py",
}

PUBLIC_PATHS = {
    ".codecov.yml",
    ".codespell/ignore_lines.txt",
    ".codespell/ignore_words.txt",
    ".flake8",
    ".github/ISSUE_TEMPLATE/bug_feature.md",
    ".github/ISSUE_TEMPLATE/release_checklist.md",
    ".github/PULL_REQUEST_TEMPLATE/pull_request_template.md",
    ".github/workflows/build-wheel-release-upload.yml",
    ".github/workflows/check-news-item.yml",
    ".github/workflows/matrix-and-codecov-on-merge-to-main.yml",
    ".github/workflows/publish-docs-on-release.yml",
    ".github/workflows/tests-on-pr.yml",
    ".gitignore",
    ".isort.cfg",
    ".pre-commit-config.yaml",
    ".readthedocs.yaml",
    "AUTHORS.rst",
    "CHANGELOG.rst",
    "CODE-OF-CONDUCT.rst",
    "LICENSE.rst",
    "MANIFEST.in",
    "README.rst",
    "docs/Makefile",
    "docs/make.bat",
    "docs/source/_static/.placeholder",
    "docs/source/api/montypy.example_package.rst",
    "docs/source/api/montypy.rst",
    "docs/source/conf.py",
    "docs/source/getting-started.rst",
    "docs/source/img/scikit-package-logo-text.png",
    "docs/source/index.rst",
    "docs/source/license.rst",
    "docs/source/release.rst",
    "docs/source/snippets/example-table.rst",
    "news/TEMPLATE.rst",
    "pyproject.toml",
    "requirements/build.txt",
    "requirements/conda.txt",
    "requirements/pip.txt",
    "requirements/tests.txt",
    "requirements/docs.txt",
    "src/montypy/__init__.py",
    "src/montypy/functions.py",
    "src/montypy/version.py",
    "tests/conftest.py",
    "tests/test_functions.py",
    "tests/test_version.py",
}


def _create(level, provided, dest):
    start = time.perf_counter()
    answers = prompts.resolve_answers(level, provided=provided)
    tree = templates.render_tree(level, answers)
    report = templates.write_tree(tree, dest, require_new_root=True)
    return report.root, time.perf_counter() - start


@pytest.mark.parametrize(
    "level, provided, root_name, expected",
    [
        ("workspace", {"folder_name": "data-analysis-projects"}, "data-analysis-projects", WORKSPACE_PATHS),
        ("system", SYSTEM_ANSWERS, "my-science-package", SYSTEM_PATHS),
        ("public", PUBLIC_ANSWERS, "montypy", PUBLIC_PATHS),
    ],
)
def test_acceptance_1_golden_trees(tmp_path, capsys, level, provided, root_name, expected):
    root, elapsed = _create(level, provided, tmp_path)
    on_disk = walk_files(root)
    ok = root.name == root_name and on_disk == expected and elapsed < 1.0
    detail = (
        f"{level}: {len(on_disk)} files, {elapsed:.3f}s"
        f"; missing={sorted(expected - on_disk)} extra={sorted(on_disk - expected)}"
    )
    verdict(capsys, 1, ok, detail)


def test_acceptance_1_namespace_layout(tmp_path, capsys):
    provided = {**PUBLIC_ANSWERS, "project_name": "montypy.grail"}
    root, elapsed = _create("public", provided, tmp_path)
    on_disk = walk_files(root)
    expected_src = {
        "src/montypy/__init__.py",
        "src/montypy/grail/__init__.py",
        "src/montypy/grail/functions.py",
        "src/montypy/grail/version.py",
    }
    src = {p for p in on_disk if p.startswith("src/")}
    # Apart from the source layout and the api docs, the tree matches the plain one.
    rest = {p for p in on_disk if not p.startswith(("src/", "docs/source/api/"))}
    plain_rest = {p for p in PUBLIC_PATHS if not p.startswith(("src/", "docs/source/api/"))}
    ns_init = (root / "src/montypy/__init__.py").read_text()
    ok = (
        root.name == "montypy.grail"
        and src == expected_src
        and rest == plain_rest
        and "extend_path" in ns_init
        and elapsed < 1.0
    )
    verdict(capsys, 1, ok, f"namespace: src={sorted(src)}, {elapsed:.3f}s")


# -- 2. changelog byte-exactness -------------------------------------------

EXPECTED_BLOCK = textwrap.dedent(
    """\
    0.1.0
    =====

    **Added: **

     * Add ``bucket()`` in ``utils.py`` for cleaning up spills.
    """
)


def test_acceptance_2_changelog_bytes(tmp_path, capsys):
    news_dir = tmp_path / "news"
    news.create_news(news_dir, "bucket", "Added", "Add ``bucket()`` in ``utils.py`` for cleaning up spills.")
    preamble = "=============\nRelease notes\n=============\n\n.. current developments\n"
    doc = news.compile_changelog("0.1.0", news.collect_news(news_dir), news.parse_changelog(preamble))
    text = news.render_changelog(doc)
    first_block = text[len(preamble) + 1:]
    ok = news.render_release(doc.releases[0]) == EXPECTED_BLOCK and first_block == EXPECTED_BLOCK
    verdict(capsys, 2, ok, f"first block {first_block!r}")


# -- 3. tag suite ---------------------------------------------------------

INVALID_TAGS = [
    "v0.1.0", "V1.2.3", "v1.0", "1.0", "1", "0.1", "1.0.0.0",
    "01.0.0", "0.01.0", "0.1.00", "1.0.0-rc.01",
    "1.0.0-rc0", "1.0.0rc.0", "1.0.0-rc", "1.0.0-rc.", "1.0.0-RC.1",
    "1.0.0-beta.1", " 1.0.0", "1.0.0\n", "1..0",
]


def _oracle_key(text):
    # Independent of the library: pure string surgery.
    core, _, rc = text.partition("-rc.")
    nums = tuple(int(x) for x in core.split("."))
    return nums + ((0, int(rc)) if rc else (1, 0))


def _random_tag_text(rng):
    nums = [str(rng.choice([0, rng.randint(0, 9), rng.randint(10, 999)])) for _ in range(3)]
    text = ".".join(nums)
    if rng.random() < 0.5:
        text += f"-rc.{rng.randint(0, 12)}"
    return text


def test_acceptance_3_tags(capsys):
    rng = random.Random(20250301)
    start = time.perf_counter()

    round_trips = 0
    for _ in range(1000):
        text = _random_tag_text(rng)
        tag = release.parse_tag(text)
        round_trips += str(tag) == text and release.parse_tag(str(tag)) == tag

    rejected = 0
    for bad in INVALID_TAGS:
        try:
            release.parse_tag(bad)
        except InvalidTag:
            rejected += 1

    # Small ranges so equal and near-equal tags occur often.
    def small_tag():
        rc = rng.choice([None, 0, 1, 2])
        return release.ReleaseTag(rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2), rc)

    order_failures = 0
    for _ in range(10_000):
        a, b, c = small_tag(), small_tag(), small_tag()
        ab, ba = release.compare_tags(a, b), release.compare_tags(b, a)
        bc, ac = release.compare_tags(b, c), release.compare_tags(a, c)
        oracle = (_oracle_key(str(a)) > _oracle_key(str(b))) - (_oracle_key(str(a)) < _oracle_key(str(b)))
        if ab != -ba or ab != oracle or ((ab == 0) != (a == b)):
            order_failures += 1
        if ab <= 0 and bc <= 0 and ac > 0:
            order_failures += 1

    chain = [release.parse_tag(t) for t in ("0.1.0-rc.0", "0.1.0-rc.1", "0.1.0")]
    chain_ok = chain[0] < chain[1] < chain[2]
    elapsed = time.perf_counter() - start
    ok = round_trips == 1000 and rejected == len(INVALID_TAGS) == 20 and not order_failures and chain_ok and elapsed < 5
    verdict(
        capsys, 3, ok,
        f"round-trips {round_trips}/1000, rejected {rejected}/{len(INVALID_TAGS)}, "
        f"order failures {order_failures}, chain {chain_ok}, {elapsed:.2f}s",
    )


# -- 4. authorization gate ------------------------------------------------

ROSTER = [
    "sirlancelotbrave", "sirrobinbrave", "kingarthur", "sirgalahad", "sirbedevere",
    "patsy", "timtheenchanter", "blackknight", "SirLancelotBrave", "sirlancelotbrave ",
]


def test_acceptance_4_authorization(capsys):
    maintainer = "sirlancelotbrave"
    mismatches = []
    for pusher, tag in itertools.product(ROSTER, ["0.1.0", "0.1.0-rc.0", "2.3.4-rc.7", "1.0.0"]):
        state = release.RepoState(maintainer=maintainer, existing_tags=["0.0.1"])
        try:
            plan = release.plan_release(tag, pusher, state)
        except Unauthorized:
            if pusher == maintainer:
                mismatches.append((pusher, tag, "denied"))
            continue
        if pusher != maintainer:
            mismatches.append((pusher, tag, "allowed"))
        elif plan.prerelease != ("-rc." in tag):
            mismatches.append((pusher, tag, f"prerelease={plan.prerelease}"))
    verdict(capsys, 4, not mismatches, f"{len(ROSTER)} pushers x 4 tags, mismatches {mismatches}")


# -- 5. migration oracle --------------------------------------------------

def test_acceptance_5_migration_oracle(capsys):
    rng = random.Random(7)
    universe = [f"p{i}" for i in range(10)]
    contents = ["c0", "c1", "c2"]
    start = time.perf_counter()
    failures = 0
    trials = 1500
    for _ in range(trials):
        old = Manifest(None, {p: rng.choice(contents) for p in universe if rng.random() < 0.5})
        new = Manifest(None, {p: rng.choice(contents) for p in universe if rng.random() < 0.5})
        plan = migrate.diff_manifests(old, new)
        expected = (
            [p for p in universe if p in old.entries and p not in new.entries],
            [p for p in universe if p not in old.entries and p in new.entries],
            [p for p in universe if p in old.entries and p in new.entries and old.entries[p] != new.entries[p]],
            [p for p in universe if p in old.entries and p in new.entries and old.entries[p] == new.entries[p]],
        )
        lists = (plan.deleted, plan.untracked, plan.modified, plan.unchanged)
        union = [p for lst in lists for p in lst]
        partition = len(union) == len(set(union)) and set(union) == set(old.entries) | set(new.entries)
        swapped = migrate.diff_manifests(new, old)
        antisym = (
            swapped.deleted == plan.untracked
            and swapped.untracked == plan.deleted
            and swapped.modified == plan.modified
            and swapped.unchanged == plan.unchanged
        )
        if tuple(lists) != expected or not partition or not antisym:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 10
    verdict(capsys, 5, ok, f"{trials} random pairs, {failures} failures, {elapsed:.2f}s")


# -- 6. no-clobber --------------------------------------------------------

def _digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_acceptance_6_no_clobber(tmp_path, capsys, public_answers):
    tree = templates.render_tree("public", public_answers)
    paths = tree.paths()
    rng = random.Random(11)
    failures = []
    for trial in range(40):
        dest = tmp_path / f"t{trial}"
        dest.mkdir()
        subset = set(rng.sample(paths, rng.randint(0, len(paths))))
        before = {}
        for rel in subset:
            target = dest / tree.root_name / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(f"pre-existing {trial} {rel}\n".encode())
            before[rel] = _digest(target)
        report = templates.write_tree(tree, dest)
        after = {rel: _digest(dest / tree.root_name / rel) for rel in subset}
        if set(report.skipped_existing) != subset or before != after:
            failures.append(trial)
        if set(report.written) != set(paths) - subset:
            failures.append(trial)
    verdict(capsys, 6, not failures, f"40 random pre-populated subsets, failing trials {failures}")


# -- 7. config layering ---------------------------------------------------

LAYERS = ("provided", "interactive", "user_default", "builtin")

# (level, key, base answers, question overrides removing the built-in value)
REPRESENTATIVES = [
    ("workspace", "folder_name", {}, {"default": None}),
    ("public", "project_short_description", PUBLIC_ANSWERS, {"default": None}),
    ("public", "github_repo_name", PUBLIC_ANSWERS, {"default": None, "derived_from": None}),
]


def _resolve_with(level, key, base, no_builtin, present):
    questions = prompts.question_set(level)
    if not present["builtin"]:
        questions = prompts.replace_question(questions, key, **no_builtin)
    provided = {k: v for k, v in base.items() if k != key}
    if present["provided"]:
        provided[key] = "from-provided"
    user_defaults = {key: "from-user-default"} if present["user_default"] else {}

    def respond(prompt):
        asked_key = prompt.split("]", 1)[1].split()[0].rstrip(":")
        if asked_key == "Select":
            return ""
        return "from-interactive" if present["interactive"] and asked_key == key else ""

    answers = prompts.resolve_answers(level, user_defaults, provided, respond, questions)
    return answers[key]


def test_acceptance_7_config_layering(capsys):
    builtin_value = {
        "folder_name": "workspace-folder",
        "project_short_description": "Python package for doing science.",
        "github_repo_name": "montypy",
    }
    checked, wrong = 0, []
    for level, key, base, no_builtin in REPRESENTATIVES:
        for flags in itertools.product([False, True], repeat=4):
            present = dict(zip(LAYERS, flags))
            winner = next((layer for layer in LAYERS if present[layer]), None)
            try:
                got = _resolve_with(level, key, base, no_builtin, present)
            except MissingAnswer:
                got = None
            expected = {
                "provided": "from-provided",
                "interactive": "from-interactive",
                "user_default": "from-user-default",
                "builtin": builtin_value[key],
                None: None,
            }[winner]
            checked += 1
            if got != expected:
                wrong.append((key, present, got))
    verdict(capsys, 7, checked == 48 and not wrong, f"{checked} combinations, wrong {wrong}")


# -- 8. transcript replay -------------------------------------------------

# Prompt text and typed response per line; trailing spaces are significant.
TRANSCRIPT_LINES = [
    "[1/16] maintainer_name (Simon Billinge): Sir Lancelot",
    "[2/16] maintainer_email (sb2896@columbia.edu): sirlancelotbrave@montypy.com",
    "[3/16] maintainer_github_username (sbillinge): sirlancelotbrave",
    "[4/16] contributors (Sangjoon Lee, Simon Billinge, Billinge Group members): "
    "Sir Lancelot, Sir Robin, King Arthur",
    "[5/16] license_holders (The Trustees of Columbia University in the City of New York): "
    "The Knights of the Round Table ",
    "[6/16] project_name (diffpy.my-project): montypy",
    "[7/16] github_username_or_orgname (diffpy): kot-roundtable",
    "[8/16] github_repo_name (montypy): ",
    "[9/16] conda_pypi_package_dist_name (montypy): ",
    "[10/16] package_dir_name (montypy): ",
    "[11/16] project_short_description (Python package for doing science.): "
    "A Python package for the the Knights of the Round Table.",
    "[12/16] project_keywords (diffraction, PDF, X-ray, neutron): knights, castle, Monty, Python",
    "[13/16] minimum_supported_python_version (3.11): ",
    "[14/16] maximum_supported_python_version (3.13): ",
    "[15/16] Select project_needs_c_code_compiled",
    "  1 - No",
    "  2 - Yes",
    "  Choose from [1/2] (1): ",
    "[16/16] Select project_has_gui_tests",
    "  1 - No",
    "  2 - Yes",
    "  Choose from [1/2] (1): ",
]
TRANSCRIPT = "".join(line + "\n" for line in TRANSCRIPT_LINES)

RESPONSES = [
    "Sir Lancelot",
    "sirlancelotbrave@montypy.com",
    "sirlancelotbrave",
    "Sir Lancelot, Sir Robin, King Arthur",
    "The Knights of the Round Table ",
    "montypy",
    "kot-roundtable",
    "",
    "",
    "",
    "A Python package for the the Knights of the Round Table.",
    "knights, castle, Monty, Python",
    "",
    "",
    "",
    "",
]


def test_acceptance_8_transcript_replay(tmp_path, capsys):
    config = tmp_path / "defaults.cfg"
    config.write_text("".join(f"{k} = {v}\n" for k, v in GROUP_DEFAULTS.items()))
    script = iter(RESPONSES)
    session = []

    def respond(prompt):
        answer = next(script)
        session.append(prompt + answer + "\n")
        return answer

    answers = prompts.resolve_answers("public", prompts.load_user_defaults(config), None, respond)
    replay = "".join(session)
    same = replay == TRANSCRIPT
    values_ok = (
        answers["license_holders"] == "The Knights of the Round Table"
        and answers["package_dir_name"] == "montypy"
        and answers["project_needs_c_code_compiled"] == "No"
        and answers["maximum_supported_python_version"] == "3.13"
    )
    first_diff = next(
        (i for i, (a, b) in enumerate(zip(replay.splitlines(), TRANSCRIPT.splitlines())) if a != b), None
    )
    verdict(
        capsys, 8, same and values_ok and len(RESPONSES) == 16,
        f"{len(session)} prompts replayed, byte-identical={same}, first differing line={first_diff}",
    )


# -- 9. black configuration -----------------------------------------------

BLACK_BLOCK = r"""[tool.black]
line-length = 79
include = '\.pyi?$'
 exclude = '''
 /(
     \.git
 | \.hg
 | \.mypy_cache
 | \.tox
 | \.venv
 | \.rst
 | \.txt
 | _build
 | buck-out
 | build
 | dist
 | blib2to3
 | tests/data
 )/
 '''
"""


def test_acceptance_9_black_block(public_answers, capsys):
    text = templates.render_tree("public", public_answers).text("pyproject.toml")
    verbatim = BLACK_BLOCK in text
    verdict(capsys, 9, verbatim and "line-length = 79" in text, f"[tool.black] block present verbatim: {verbatim}")
