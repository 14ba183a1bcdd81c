"""Small Gauss-Legendre panel integrator used by the transform and scan code."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import AccuracyError

__all__ = ["gauss_legendre", "panel_integral", "graded_edges", "adaptive_integral"]


@lru_cache(maxsize=32)
def gauss_legendre(order: int):
    """Nodes and weights on [-1, 1], cached per order."""
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_integral(f, edges, order: int) -> float:
    """Composite Gauss-Legendre integral of ``f`` over consecutive panels.

    ``f`` must accept an ndarray of abscissae and return values elementwise.
    """
    x, w = gauss_legendre(order)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        total += half * float(np.sum(w * f(mid + half * x)))
    return total


def graded_edges(a: float, b: float, levels: int) -> np.ndarray:
    """Panel edges on [a, b], geometrically refined toward the left endpoint.

    Handles integrable endpoint behavior (algebraic singularities of the
    integrand's derivatives at ``a``) without adaptive bookkeeping: the
    edges are a, a + L/2^(levels-1), ..., a + L/2, b with L = b - a.
    """
    span = b - a
    return np.array([a] + [a + span / 2.0 ** k for k in range(levels - 1, -1, -1)])


def adaptive_integral(f, edges, rel_tol: float, order: int = 16,
                      max_doublings: int = 6, what: str = "integral") -> float:
    """Panel integral with Gauss order doubled until two evaluations agree.

    Raises AccuracyError with a diagnostic when the doubling ladder is
    exhausted without meeting ``rel_tol``.
    """
    prev = None
    k = order
    for _ in range(max_doublings + 1):
        val = panel_integral(f, edges, k)
        if prev is not None and abs(val - prev) <= rel_tol * max(abs(val), 1e-300):
            return val
        prev = val
        k *= 2
    raise AccuracyError(
        f"{what}: Gauss ladder exhausted at order {k // 2} "
        f"(last two values {prev!r}); target rel_tol={rel_tol:g}")
