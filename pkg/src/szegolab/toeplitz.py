"""Truncated Toeplitz operators for a circle inside the disc.

For the radius-r circle with a nonnegative symbol the operator acts on the
monomial basis through explicit one-dimensional integrals: a constant symbol
gives a diagonal operator with eigenvalues known in closed form, and a
finite Fourier symbol gives a banded Hermitian matrix.  The module also
evaluates the cyclic phase function and the composition-trace integral,
which serve as independent oracles for the spectral formulas.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bergman import BallPoint
from .eigen import jacobi_eigenvalues
from .errors import AccuracyError, DomainError
from .specfun import log_gamma, normalizing_constant

__all__ = [
    "CircleSymbolModel",
    "SpectrumTruncation",
    "largest_eigenvalue_index",
    "default_cutoff",
    "explicit_eigenvalues",
    "matrix_elements",
    "hermitian_eigenvalues",
    "phase_value",
    "phase_imag_batch",
    "label_product",
    "label_product_batch",
    "composition_trace_quadrature",
]

_SYMBOL_GRID = 4096


@dataclass(frozen=True)
class CircleSymbolModel:
    """Circle |z| = r in the disc with weight alpha and a real symbol.

    ``fourier`` holds the coefficients a_hat[0..K] of
    a(theta) = sum_m a_hat[m] e^{2 pi i m theta}; negative indices are the
    conjugates, so the symbol is real by construction.  ``fourier=None``
    means the constant symbol 1.  The symbol must be nonnegative (checked on
    a 4096-point grid) for the positivity-dependent results downstream.
    """

    r: float
    alpha: float
    fourier: Optional[tuple] = None
    norm_bound: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise DomainError(f"circle radius must lie in (0, 1), got {self.r}")
        if not self.alpha > -1.0:
            raise DomainError(f"weight parameter must exceed -1, got {self.alpha}")
        if self.fourier is not None:
            coeffs = tuple(complex(c) for c in self.fourier)
            if not coeffs:
                raise DomainError("fourier coefficient list must not be empty")
            if abs(coeffs[0].imag) > 1e-14 * max(1.0, abs(coeffs[0])):
                raise DomainError("zeroth Fourier coefficient must be real")
            object.__setattr__(self, "fourier", coeffs)
            theta = np.arange(_SYMBOL_GRID) / _SYMBOL_GRID
            vals = self.symbol_values(theta)
            if vals.min() < -1e-12 * max(vals.max(), 1.0):
                raise DomainError(
                    f"symbol is negative on the check grid (min {vals.min():.3e})")
        sup = 1.0 if self.fourier is None else float(
            self.symbol_values(np.arange(_SYMBOL_GRID) / _SYMBOL_GRID).max())
        object.__setattr__(self, "norm_bound", sup / (1.0 - self.r ** 2) ** 2)

    @property
    def is_constant_one(self) -> bool:
        return self.fourier is None

    def symbol_values(self, theta) -> np.ndarray:
        """Symbol evaluated on an array of angles (period-1 convention)."""
        theta = np.asarray(theta, dtype=float)
        if self.fourier is None:
            return np.ones_like(theta)
        coeffs = self.fourier
        vals = np.full_like(theta, float(coeffs[0].real))
        for m_idx in range(1, len(coeffs)):
            vals += 2.0 * (coeffs[m_idx] * np.exp(2j * np.pi * m_idx * theta)).real
        return vals

    def fourier_coefficient(self, index: int) -> complex:
        """a_hat[index] for any integer index (conjugate symmetry built in)."""
        coeffs = self.fourier if self.fourier is not None else (1.0 + 0j,)
        k = abs(index)
        if k >= len(coeffs):
            return 0.0 + 0j
        c = complex(coeffs[k])
        return c if index >= 0 else c.conjugate()


@dataclass(frozen=True)
class SpectrumTruncation:
    """Finite truncation of a nonnegative spectrum.

    ``eigenvalues`` is sorted descending; ``by_index`` keeps the same values
    in basis order (index m) for argmax queries.  ``tail_estimate`` bounds
    the sum of all omitted eigenvalues from above via a geometric tail.
    """

    eigenvalues: np.ndarray
    by_index: np.ndarray
    cutoff_index: int
    tail_estimate: float
    alpha: float
    normalized: bool
    norm_bound: float

    def argmax_index(self, rel_tol: float = 1e-12) -> int:
        """Largest basis index attaining the maximum within rel_tol.

        Adjacent eigenvalues tie exactly when (alpha+1) r^2/(1-r^2) is an
        integer; the largest index is the canonical representative.
        """
        top = float(self.by_index.max())
        hits = np.nonzero(self.by_index >= top * (1.0 - rel_tol))[0]
        return int(hits[-1])


def largest_eigenvalue_index(r: float, alpha: float) -> int:
    """Index floor((alpha + 1) r^2 / (1 - r^2)) of the largest eigenvalue.

    A 1e-9 nudge guards against the ratio landing an ulp below an integer
    (e.g. r = 1/sqrt(2), where r^2 rounds just under 1/2).
    """
    return int(math.floor((alpha + 1.0) * r * r / (1.0 - r * r) + 1e-9))


def _log_eigenvalues(model: CircleSymbolModel, count: int) -> np.ndarray:
    # log of the normalized eigenvalues: sqrt(2 pi / alpha) (1-r^2)^(alpha-1)
    # * Gamma(alpha+m+2) / (Gamma(alpha+1) m!) * r^(2m+1)
    r, a = model.r, model.alpha
    m = np.arange(count + 1, dtype=float)
    return (0.5 * math.log(2.0 * math.pi / a)
            + (a - 1.0) * math.log(1.0 - r * r)
            + log_gamma(a + m + 2.0) - log_gamma(a + 1.0) - log_gamma(m + 1.0)
            + (2.0 * m + 1.0) * math.log(r))


def default_cutoff(model: CircleSymbolModel) -> int:
    """Truncation index: past the eigenvalue peak plus a safety band.

    Starts at m* + ceil(12 (sqrt(alpha+1) r/(1-r^2) + 50)) and extends until
    the last eigenvalue sits below 1e-14 of the largest (eigenvalues decay
    geometrically past the peak, ratio -> r^2).
    """
    if not model.alpha > 0.0:
        raise DomainError("cutoff rule requires alpha > 0")
    r, a = model.r, model.alpha
    m_peak = largest_eigenvalue_index(r, a)
    cut = m_peak + math.ceil(12.0 * (math.sqrt(a + 1.0) * r / (1.0 - r * r) + 50.0))
    while True:
        ln = _log_eigenvalues(model, cut)
        if ln[-1] < ln.max() + math.log(1e-14):
            return cut
        cut = int(cut * 1.25) + 8


def explicit_eigenvalues(model: CircleSymbolModel,
                         cutoff: Optional[int] = None) -> SpectrumTruncation:
    """Closed-form eigenvalues of the normalized operator, constant symbol.

    Evaluated entirely in log space; the result is the descending spectrum
    of the operator scaled by 1/sqrt(2 pi alpha), truncated at ``cutoff``
    (default: the geometric-decay rule).
    """
    if not model.is_constant_one:
        raise DomainError("explicit eigenvalues exist only for the constant symbol")
    if not model.alpha > 0.0:
        raise DomainError("explicit eigenvalue formula requires alpha > 0")
    cut = default_cutoff(model) if cutoff is None else int(cutoff)
    if cut < 0:
        raise DomainError(f"cutoff must be nonnegative, got {cutoff}")
    with np.errstate(under="ignore"):
        lam = np.exp(_log_eigenvalues(model, cut))
    ratio_next = (model.alpha + 1.0) * model.r ** 2 / (cut + 1.0) + model.r ** 2
    tail = lam[-1] * ratio_next / (1.0 - ratio_next) if ratio_next < 1.0 else math.inf
    return SpectrumTruncation(
        eigenvalues=np.sort(lam)[::-1],
        by_index=lam,
        cutoff_index=cut,
        tail_estimate=float(tail),
        alpha=model.alpha,
        normalized=True,
        norm_bound=model.norm_bound,
    )


def matrix_elements(model: CircleSymbolModel,
                    cutoff: Optional[int] = None) -> np.ndarray:
    """Truncated operator in the monomial basis (unnormalized).

    Entry (j, k) equals c_alpha (1-r^2)^alpha (2 pi r/(1-r^2)) delta_j
    delta_k r^{j+k} a_hat[j-k]; the conjugate symmetry of the coefficients
    makes the matrix Hermitian.  A constant symbol gives the diagonal of
    closed-form eigenvalues times sqrt(2 pi alpha).
    """
    cut = default_cutoff(model) if cutoff is None else int(cutoff)
    if cut < 0:
        raise DomainError(f"cutoff must be nonnegative, got {cutoff}")
    r, a = model.r, model.alpha
    m = np.arange(cut + 1, dtype=float)
    log_delta = 0.5 * (log_gamma(m + a + 2.0) - log_gamma(m + 1.0)
                       - log_gamma(a + 2.0))
    log_pref = (math.log(normalizing_constant(1, a))
                + a * math.log(1.0 - r * r)
                + math.log(2.0 * math.pi * r / (1.0 - r * r)))
    log_row = log_pref / 2.0 + log_delta + m * math.log(r)
    bandwidth = 0 if model.fourier is None else len(model.fourier) - 1
    out = np.zeros((cut + 1, cut + 1), dtype=complex)
    with np.errstate(under="ignore"):
        for off in range(-min(bandwidth, cut), min(bandwidth, cut) + 1):
            coeff = model.fourier_coefficient(off)
            if coeff == 0:
                continue
            j = np.arange(max(0, off), cut + 1 + min(0, off))
            k = j - off
            out[j, k] = np.exp(log_row[j] + log_row[k]) * coeff
    if model.is_constant_one:
        return out.real
    return out


def hermitian_eigenvalues(matrix) -> np.ndarray:
    """Full spectrum of a Hermitian matrix, descending (cyclic Jacobi)."""
    return jacobi_eigenvalues(matrix, hermitian_tol=1e-12)


def _point_coords(point) -> tuple:
    if isinstance(point, BallPoint):
        return point.coords
    if isinstance(point, (complex, float, int)):
        return (complex(point),)
    return tuple(complex(z) for z in point)


def phase_value(points) -> complex:
    """Cyclic phase i sum_j Log((1 - <xi_j, xi_j+1>) / (1 - |xi_j|^2)).

    Indices wrap around; the principal branch applies throughout (the
    argument never meets (-inf, 0] for points inside the ball).  The
    imaginary part is nonnegative and vanishes only on the diagonal.
    """
    pts = [_point_coords(p) for p in points]
    if len(pts) < 2:
        raise DomainError("phase needs at least two points")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise DomainError("all points must share one dimension")
    total = 0.0 + 0.0j
    for j, pj in enumerate(pts):
        pn = pts[(j + 1) % len(pts)]
        inner = sum(a * b.conjugate() for a, b in zip(pj, pn))
        # |xi|^2 through the same product expression as the inner product,
        # so the all-equal tuple gives exactly log(1) = 0.
        nsq = sum((a * a.conjugate()).real for a in pj)
        total += cmath.log((1.0 - inner) / (1.0 - nsq))
    return 1j * total


def phase_imag_batch(tuples: np.ndarray) -> np.ndarray:
    """Imaginary part of the phase for a batch of point tuples.

    ``tuples`` has shape (batch, m, n): m cyclically-linked points of the
    n-ball per row.  Used by the large property suites.
    """
    z = np.asarray(tuples, dtype=complex)
    if z.ndim != 3:
        raise DomainError("expected an array of shape (batch, m, n)")
    z_next = np.roll(z, -1, axis=1)
    inner = np.sum(z * z_next.conj(), axis=2)
    nsq = np.sum((z * z.conj()).real, axis=2)
    return np.sum(np.log(np.abs((1.0 - inner) / (1.0 - nsq))), axis=1)


def label_product(d_values) -> float:
    """Cyclic product of (1 - d_j d_{j+1}) / (1 - d_j^2) over labels in (0,1).

    Always at least 1, with equality exactly for constant tuples.
    """
    d = np.asarray(d_values, dtype=float)
    if d.size < 2:
        raise DomainError("label product needs at least two values")
    if np.any(d <= 0.0) or np.any(d >= 1.0):
        raise DomainError("labels must lie strictly inside (0, 1)")
    return float(np.prod((1.0 - d * np.roll(d, -1)) / (1.0 - d * d)))


def label_product_batch(rows: np.ndarray) -> np.ndarray:
    """Row-wise cyclic label products for an array of shape (batch, m)."""
    d = np.asarray(rows, dtype=float)
    return np.prod((1.0 - d * np.roll(d, -1, axis=1)) / (1.0 - d * d), axis=1)


def composition_trace_quadrature(model: CircleSymbolModel, m: int,
                                 rel_tol: float = 1e-7,
                                 max_nodes: int = 1024) -> float:
    """Unnormalized trace of the m-fold composition by periodic quadrature.

    Evaluates the m-dimensional trapezoid sum of the exact cyclic integrand
    over the circle (spectrally accurate for this smooth periodic function),
    doubling the per-axis node count until two successive values agree to
    ``rel_tol``.  The tensor sum is contracted as a matrix trace, which is
    the identical sum in a fixed order.
    """
    if m not in (2, 3):
        raise DomainError(f"composition trace supports m in {{2, 3}}, got {m}")
    if model.alpha > 200.0:
        raise DomainError(
            "quadrature path requires alpha <= 200 (integrand peak resolution)")
    if max_nodes < 128:
        raise DomainError("node cap must allow at least one doubling (>= 128)")
    r, a = model.r, model.alpha
    c_alpha = normalizing_constant(1, a)
    pref = (c_alpha * 2.0 * math.pi * r / (1.0 - r * r)) ** m
    prev = None
    n_nodes = 64
    while n_nodes <= max_nodes:
        theta = np.arange(n_nodes) / n_nodes
        diff = theta[:, None] - theta[None, :]
        base = 1.0 - r * r * np.exp(2j * np.pi * diff)
        log_edge = a * (math.log(1.0 - r * r) - np.log(base)) - 2.0 * np.log(base)
        with np.errstate(under="ignore"):
            edge = np.exp(log_edge)
        weighted = (model.symbol_values(theta)[:, None] * edge) / n_nodes
        prod = weighted
        for _ in range(m - 1):
            prod = prod @ weighted
        val = pref * float(np.trace(prod).real)
        if prev is not None and abs(val - prev) <= rel_tol * abs(val):
            return val
        prev = val
        n_nodes *= 2
    last_gap = abs(val - prev) / abs(val)
    if last_gap <= 1e-6:
        warnings.warn(
            f"composition trace reached the {max_nodes}-node cap with relative "
            f"gap {last_gap:.2e}; returning the finest value")
        return val
    raise AccuracyError(
        f"composition trace did not converge: cap {max_nodes} nodes/axis, "
        f"last relative gap {last_gap:.2e}, target {rel_tol:g}")
