"""Scaffold shareable Python projects, compile changelogs, plan releases and migrations."""

__version__ = "0.1.0"
TOOL_NAME = "pakforge"
