"""Sutured Floer homology over GF(2) and the contact class of partial open books."""

from __future__ import annotations

__version__ = "0.1.0"
