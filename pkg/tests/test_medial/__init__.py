"""Tests for medial mesh extraction and output."""
