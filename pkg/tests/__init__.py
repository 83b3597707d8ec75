"""Tests for the sl2lc package."""
