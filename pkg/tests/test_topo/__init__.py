"""Tests for topology checks and fixes."""
