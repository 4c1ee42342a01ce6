"""Tests for Prior."""
