"""Exact local invariants of ternary quadratic forms at an odd prime."""

try:
    from ._qplocal import *  # installed layout  # noqa: F401,F403
except ImportError:  # build-tree layout with the extension on PYTHONPATH
    from _qplocal import *  # noqa: F401,F403
