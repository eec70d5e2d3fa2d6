"""Aligned Drawing - aligned graphs on pseudoline arrangements and their straight-line drawings."""

__version__ = "0.1.0"
