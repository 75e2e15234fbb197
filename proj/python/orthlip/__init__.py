"""Python bindings for the orthlip C++ library."""

from ._core import *  # noqa: F401,F403
from ._core import (
    ConvergenceError,
    Error,
    InvalidArgument,
    NotStabilizedError,
    RangeError,
)

__version__ = "0.1.0"


def check(kind, **fields):
    """CheckSpec of the given kind name with fields set by keyword.

    Axes j and k are zero-based here, as in the C++ API.
    """
    spec = CheckSpec(parse_check_kind(kind))  # noqa: F405
    for key, value in fields.items():
        if not hasattr(spec, key):
            raise AttributeError(f"CheckSpec has no field '{key}'")
        setattr(spec, key, value)
    return spec
