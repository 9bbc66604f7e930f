"""Tests for the geometric error check."""
