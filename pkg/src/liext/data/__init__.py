"""Bundled example documents."""
