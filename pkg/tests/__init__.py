"""Tests for the medial axis pipeline."""
