from ._scopekit import (
    ScopekitError,
    UnsupportedCapability,
    check,
    fragments,
    monads,
    run,
    substitute,
    suites,
)

__all__ = [
    "ScopekitError",
    "UnsupportedCapability",
    "check",
    "fragments",
    "monads",
    "run",
    "substitute",
    "suites",
]
