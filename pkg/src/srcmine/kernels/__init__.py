"""Training kernel backends: compiled extension when built, pure Python otherwise.

Set SRCMINE_PURE=1 to force the pure backend (used by the benchmark to
compare the two).
"""

import os

from srcmine.kernels import pure as _pure

if os.environ.get("SRCMINE_PURE"):
    _impl = _pure
else:
    try:
        from srcmine.kernels import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
epoch_update = _impl.epoch_update
margins = _impl.margins


def available_backends():
    """Names of importable kernel backends."""
    names = ["pure"]
    try:
        from srcmine.kernels import _speedups  # noqa: F401
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


def get_backend(name):
    """Return a specific backend module ("pure" or "cython")."""
    if name == "pure":
        return _pure
    if name == "cython":
        from srcmine.kernels import _speedups
        return _speedups
    raise ValueError(f"unknown kernel backend: {name!r}")
