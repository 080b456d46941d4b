"""G2 octonion algebra, twistor lifts of harmonic maps into G2/SO(4), and extended-solution checks."""

from ._core import (
    Config,
    InputError,
    RejectedMap,
    associator,
    build_loop,
    check_loop,
    cross,
    dot,
    fixtures,
    lift,
    suite_names,
    verify,
    weight_basis,
)

__all__ = [
    "Config",
    "InputError",
    "RejectedMap",
    "associator",
    "build_loop",
    "check_loop",
    "cross",
    "dot",
    "fixtures",
    "lift",
    "suite_names",
    "verify",
    "weight_basis",
]
