"""Tests for momax."""
