"""Tests for feature preservation."""
