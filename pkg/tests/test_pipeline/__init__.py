"""Tests for the pipeline driver and CLI."""
