"""Tests for indel-entropy."""
