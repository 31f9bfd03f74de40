"""Test package."""

from __future__ import annotations

import logging

# Keep unittest output clean; tests assert behavior directly.
logging.disable(logging.CRITICAL)
