"""Tests for the restricted power diagram."""
