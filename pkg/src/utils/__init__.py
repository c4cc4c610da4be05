"""Shared helpers across modules."""
