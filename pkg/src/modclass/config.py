"""Size caps shared by every computation.

Caps are configuration, never silent truncation: exceeding one raises a
:class:`~modclass.errors.CapExceeded` subclass.
"""
from __future__ import annotations

import contextlib
import dataclasses
import os


@dataclasses.dataclass(frozen=True)
class Caps:
    ring_size: int = 4096
    module_size: int = 65536
    lattice: int = 20000
    hom: int = 65536

    def __post_init__(self):
        for field in dataclasses.fields(self):
            if getattr(self, field.name) <= 0:
                raise ValueError(f"cap {field.name} must be positive")


def _from_env() -> Caps:
    caps = Caps()
    value = os.environ.get("MODCLASS_MAX_MODULE_SIZE")
    if value:
        caps = dataclasses.replace(caps, module_size=int(value))
    return caps


_current = _from_env()


def caps() -> Caps:
    return _current


def set_caps(**kwargs) -> Caps:
    global _current
    _current = dataclasses.replace(_current, **kwargs)
    return _current


@contextlib.contextmanager
def override(**kwargs):
    """Temporarily replace some caps (used by tests and the CLI)."""
    global _current
    saved = _current
    _current = dataclasses.replace(_current, **kwargs)
    try:
        yield _current
    finally:
        _current = saved
