"""Example sub-project that reuses the workspace's shared functions."""
