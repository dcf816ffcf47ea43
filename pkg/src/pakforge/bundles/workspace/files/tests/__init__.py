"""Tests for the shared workspace code."""
