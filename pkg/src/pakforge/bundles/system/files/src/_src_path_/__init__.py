"""Reusable code for {{ project_name }}."""
