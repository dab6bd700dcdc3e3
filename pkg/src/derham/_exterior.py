"""Index-set bookkeeping for exterior algebra terms ``{sorted index tuple: Poly}``."""
from __future__ import annotations

from typing import Callable

from .polyring import Poly


def merge_indices(j: tuple, k: tuple) -> tuple[int, tuple | None]:
    """Sign and sorted union of two index tuples; sign 0 when they overlap."""
    if set(j) & set(k):
        return 0, None
    inversions = sum(1 for a in j for b in k if a > b)
    return (-1 if inversions & 1 else 1), tuple(sorted(j + k))


def accumulate(out: dict, key: tuple, value: Poly) -> None:
    if not value:
        return
    s = out[key] + value if key in out else value
    if s:
        out[key] = s
    else:
        del out[key]


def add_terms(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        accumulate(out, k, v if sign > 0 else -v)
    return out


def wedge_terms(a: dict, b: dict, reduce: Callable[[Poly], Poly] | None = None) -> dict:
    out: dict = {}
    for j, u in a.items():
        for k, v in b.items():
            sign, key = merge_indices(j, k)
            if sign:
                prod = u * v
                accumulate(out, key, prod if sign > 0 else -prod)
    if reduce is not None:
        out = {k: r for k, r in ((k, reduce(v)) for k, v in out.items()) if r}
    return out


def d_terms(a: dict, n: int) -> dict:
    out: dict = {}
    for j, u in a.items():
        for i in range(n):
            if i in j:
                continue
            du = u.derivative(i)
            if du:
                sign, key = merge_indices((i,), j)
                accumulate(out, key, du if sign > 0 else -du)
    return out


def contract(a: dict, vector: tuple[Poly, ...], reduce: Callable[[Poly], Poly] | None = None) -> dict:
    """Interior product with the vector field ``sum v_k d/dX_k``."""
    out: dict = {}
    for j, u in a.items():
        for pos, k in enumerate(j):
            if vector[k]:
                prod = vector[k] * u
                accumulate(out, j[:pos] + j[pos + 1:], prod if pos % 2 == 0 else -prod)
    if reduce is not None:
        out = {k: r for k, r in ((k, reduce(v)) for k, v in out.items()) if r}
    return out
