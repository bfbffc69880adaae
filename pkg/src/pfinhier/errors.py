"""Exception taxonomy shared by the kernel and the command line front end.

Every error raised on a public surface is one of these, so callers (and the
CLI exit-code mapping) can distinguish bad arguments from operations that are
simply not applicable, from queries that exceed the configured construction
floor, and from internal invariant breaches.
"""


class HierarchyError(Exception):
    """Base class for all kernel errors."""


class InputError(HierarchyError):
    """Malformed or out-of-contract argument (CLI exit code 2)."""


class DomainError(HierarchyError):
    """Well-formed input for which the operation is undefined (CLI exit code 1)."""


class FloorError(HierarchyError):
    """Query requires hierarchy levels below the configured floor (CLI exit code 3)."""


class ConsistencyError(HierarchyError):
    """Internal invariant violated; indicates a bug, never a user mistake."""
