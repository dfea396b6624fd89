"""Python interface to the block-diffusion decoding engine."""

try:
    from ._core import *  # noqa: F401,F403  (installed wheel layout)
    from . import _core as _impl
except ImportError:  # pragma: no cover - dev-tree layout
    from _core import *  # noqa: F401,F403
    import _core as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
