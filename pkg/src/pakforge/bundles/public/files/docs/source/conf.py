"""Sphinx configuration for {{ conda_pypi_package_dist_name }}."""

import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

project = "{{ conda_pypi_package_dist_name }}"
author = "{{ license_holders }}"
copyright = "{{ license_holders }}"

try:
    release = version("{{ conda_pypi_package_dist_name }}")
except PackageNotFoundError:
    release = "unknown"
version = ".".join(release.split(".")[:2])

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "sphinx_copybutton",
]

templates_path = []
exclude_patterns = ["snippets/*"]
html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
html_logo = "img/scikit-package-logo-text.png"
autodoc_member_order = "bysource"
