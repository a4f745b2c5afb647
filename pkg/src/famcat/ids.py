"""Identifier ordering and JSON conversion.

Identifiers are strings, integers or nested tuples of identifiers.  Every
canonical choice in the package sorts by :func:`idkey` so results do not
depend on dict or set iteration order.
"""

from __future__ import annotations

from typing import Any, Iterable


def idkey(x: Any):
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, tuple):
        return (2, tuple(idkey(y) for y in x))
    if x is None:
        return (-1,)
    if isinstance(x, frozenset):
        return (3, tuple(sorted(idkey(y) for y in x)))
    raise TypeError(f"unsupported identifier {x!r}")


def sorted_ids(xs: Iterable) -> list:
    return sorted(xs, key=idkey)


def least(xs: Iterable):
    return min(xs, key=idkey)


def to_jsonable(x: Any):
    """Tuples become lists, dict keys are kept, frozensets become sorted lists."""
    if isinstance(x, tuple) or isinstance(x, list):
        return [to_jsonable(y) for y in x]
    if isinstance(x, frozenset) or isinstance(x, set):
        return [to_jsonable(y) for y in sorted_ids(x)]
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: to_jsonable(v) for k, v in x.items()}
    return x


def from_jsonable(x: Any):
    """Inverse of :func:`to_jsonable` for identifiers: lists become tuples."""
    if isinstance(x, list):
        return tuple(from_jsonable(y) for y in x)
    return x


def show(x: Any) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(show(y) for y in x) + ")"
    return str(x)
