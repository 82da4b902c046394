"""Pytest configuration and fixtures."""

import math
import shutil
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from indel_entropy.entropy import ChannelKind, ChannelSpec

TEST_Q = 2
TEST_TOLERANCE = 1e-9

# Worked values used across modules
TEST_EMBED_Y = "120"
TEST_EMBED_X = "11220"
TEST_EMBED_Q = 3
TEST_EMBED_COUNT = 4

# 1-Del input entropy of 0000 (n=5, q=2): log2(10) - log2(5)/2
TEST_CONSTANT_WORD = "0000"
TEST_CONSTANT_1DEL_BITS = math.log2(10) - math.log2(5) / 2

# Average 1-Del input entropy at n=3, q=2
TEST_AVERAGE_N3_BITS = 1.855388


@pytest.fixture
def temp_config_dir():
    """Create a temporary config directory."""
    temp_dir = tempfile.mkdtemp()
    with patch("indel_entropy.config.CONFIG_DIR", Path(temp_dir)):
        with patch("indel_entropy.config.CONFIG_FILE", Path(temp_dir) / "config.yaml"):
            yield Path(temp_dir)
    shutil.rmtree(temp_dir)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Keep user config files and budget variables out of every test."""
    monkeypatch.delenv("INDEL_ENTROPY_BUDGET", raising=False)
    monkeypatch.delenv("INDEL_ENTROPY_MATRIX_BUDGET", raising=False)
    monkeypatch.setattr("indel_entropy.config.CONFIG_FILE", tmp_path / "absent.yaml")
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def one_deletion():
    """Binary single-deletion channel."""
    return ChannelSpec(ChannelKind.DELETION, 1, TEST_Q)


@pytest.fixture
def one_insertion():
    """Binary single-insertion channel."""
    return ChannelSpec(ChannelKind.INSERTION, 1, TEST_Q)
