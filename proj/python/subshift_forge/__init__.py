"""Python bindings for the subshift-forge C++ core."""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core
except ImportError:  # running against a bare build tree via PYTHONPATH
    import _core
    from _core import *  # noqa: F401,F403

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = "0.1.0"
