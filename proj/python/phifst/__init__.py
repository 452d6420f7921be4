"""Subsequential failure-transducer algebra (see the README for the format)."""

try:
    from phifst._phifst import *  # noqa: F401,F403
except ImportError:
    from _phifst import *  # noqa: F401,F403

__all__ = [
    "Machine",
    "MachineError",
    "parse",
    "print_text",
    "evaluate",
    "enumerate_table",
    "expand_failures",
    "compose",
    "normalize",
    "star",
    "compose_special",
    "push",
    "check",
]
