"""Tests for tet mesh loading, features and sampling."""
