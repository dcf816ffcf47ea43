import os
from pathlib import Path

import pytest

from pakforge import prompts

# Identity values a research group would keep in its user-defaults file.
GROUP_DEFAULTS = {
    "maintainer_name": "Simon Billinge",
    "maintainer_email": "sb2896@columbia.edu",
    "maintainer_github_username": "sbillinge",
    "contributors": "Sangjoon Lee, Simon Billinge, Billinge Group members",
    "license_holders": "The Trustees of Columbia University in the City of New York",
    "project_name": "diffpy.my-project",
    "github_username_or_orgname": "diffpy",
    "project_keywords": "diffraction, PDF, X-ray, neutron",
}

SYSTEM_ANSWERS = {
    "project_name": "my-science-package",
    "github_username_or_orgname": "sirlancelotbrave",
    "contributors": "Sir Lancelot, King Arthur",
}

PUBLIC_ANSWERS = {
    "maintainer_name": "Sir Lancelot",
    "maintainer_email": "sirlancelotbrave@montypy.com",
    "maintainer_github_username": "sirlancelotbrave",
    "contributors": "Sir Lancelot, Sir Robin, King Arthur",
    "license_holders": "The Knights of the Round Table",
    "project_name": "montypy",
    "github_username_or_orgname": "kot-roundtable",
    "project_short_description": "A Python package for the the Knights of the Round Table.",
    "project_keywords": "knights, castle, Monty, Python",
}


def walk_files(root) -> set:
    """Relative posix paths of every file below ``root`` (test-side oracle)."""
    root = Path(root)
    found = set()
    for dirpath, _, filenames in os.walk(root):
        for name in filenames:
            found.add((Path(dirpath) / name).relative_to(root).as_posix())
    return found


@pytest.fixture
def public_answers():
    return prompts.resolve_answers("public", provided=PUBLIC_ANSWERS)


@pytest.fixture
def system_answers():
    return prompts.resolve_answers("system", provided=SYSTEM_ANSWERS)


@pytest.fixture
def workspace_answers():
    return prompts.resolve_answers("workspace", provided={"folder_name": "data-analysis-projects"})


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    # Never let a developer's real defaults file leak into a test.
    monkeypatch.setenv(prompts.CONFIG_ENV_VAR, str(tmp_path / "no-config"))
