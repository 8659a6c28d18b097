"""Access to the spec file shipped with the package."""

from __future__ import annotations

import hashlib
from importlib import resources

__all__ = ["builtin_spec_text", "sha256_of"]


def builtin_spec_text() -> str:
    """The built-in Q(3A)_2^2 presentation, byte for byte as shipped."""
    return resources.files("qtilt").joinpath("data/q3a22.spec").read_text(encoding="utf-8")


def sha256_of(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
