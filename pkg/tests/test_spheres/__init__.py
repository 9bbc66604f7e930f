"""Tests for sphere generation."""
