"""Floating-point layer: truncated Fredholm determinants of multiplicative
commutators of exponential Toeplitz operators.

For Laurent polynomial exponents f and g the target value has the closed
form exp(sum_k k f_{-k} g_k), the residue evaluation of (1/2 pi i) int f dg.
The numeric route builds T_{e^f} and T_{e^g} as truncated Toeplitz matrices,
inverts them through the analytic/co-analytic splitting

    e^f = e^{f_-} * e^{f_0 + f_+},   T_{e^f}^{-1} = T_{e^{-f_0-f_+}} T_{e^{-f_-}}

(triangular factors invert exactly at the symbol level), multiplies out the
commutator at an enlarged size N + B, and returns the determinant of the
leading N x N block.  The buffer B absorbs the truncation edge; the default
follows B = 4 K ceil(ln(1/eps)/ln 2) with eps = 1e-14 and K the degree span.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError

_PIVOT_FLOOR = 1e-12
_TERM_FLOOR = 1e-300


class TrigPoly:
    """A trigonometric (Laurent) polynomial with complex coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict):
        clean = {}
        for k, v in coeffs.items():
            v = complex(v)
            if v != 0:
                clean[int(k)] = v
        self.coeffs = clean

    def __getitem__(self, k: int) -> complex:
        return self.coeffs.get(k, 0j)

    def span(self) -> int:
        if not self.coeffs:
            return 0
        return max(abs(k) for k in self.coeffs)

    def part(self, which: str) -> "TrigPoly":
        """'minus' (k < 0), 'zero' (k = 0), or 'plus' (k > 0) piece."""
        if which == "minus":
            keep = {k: v for k, v in self.coeffs.items() if k < 0}
        elif which == "plus":
            keep = {k: v for k, v in self.coeffs.items() if k > 0}
        elif which == "zero":
            keep = {k: v for k, v in self.coeffs.items() if k == 0}
        else:
            raise ValueError(f"unknown part {which!r}")
        return TrigPoly(keep)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly({k: -v for k, v in self.coeffs.items()})

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0j) + v
        return TrigPoly(out)

    def __repr__(self):
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.coeffs.items()))
        return f"TrigPoly({{{items}}})"


def exp_symbol_coeffs(f: TrigPoly, order: int) -> dict:
    """Fourier coefficients of e^f on degrees [-order, order].

    Term-accumulated products: the running term f^j / j! is convolved at
    full support (no intermediate truncation), and only the final result is
    windowed.  The discarded tail is O(||f||^(order/K) / floor(order/K)!)
    for span K, far below double precision for the symbols used here.
    """
    if order < f.span():
        raise DomainError("truncation order below the degree span")
    result = {0: 1.0 + 0j}
    term = {0: 1.0 + 0j}
    for j in range(1, 400):
        nxt: dict = {}
        for k1, v1 in term.items():
            for k2, v2 in f.coeffs.items():
                key = k1 + k2
                nxt[key] = nxt.get(key, 0j) + v1 * v2
        term = {k: v / j for k, v in nxt.items() if v != 0}
        size = max((abs(v) for v in term.values()), default=0.0)
        if size < _TERM_FLOOR:
            break
        for k, v in term.items():
            result[k] = result.get(k, 0j) + v
        if size < 1e-25 and j >= 2:
            break
    return {k: v for k, v in result.items() if -order <= k <= order and v != 0}


def closed_form_di(f: TrigPoly, g: TrigPoly) -> complex:
    """exp(sum_k k f_{-k} g_k): the residue form of the pairing integral."""
    total = 0j
    for k, gk in g.coeffs.items():
        fk = f[-k]
        if fk != 0:
            total += k * fk * gk
    return cmath.exp(total)


def toeplitz_matrix(coeffs: dict, size: int) -> np.ndarray:
    """Dense Toeplitz block M[j, k] = coeffs[j - k] of the given size."""
    m = np.zeros((size, size), dtype=complex)
    for k, v in coeffs.items():
        if abs(k) >= size:
            continue
        idx = np.arange(size - abs(k))
        if k >= 0:
            m[idx + k, idx] = v
        else:
            m[idx, idx - k] = v
    return m


def _lu_determinant(block: np.ndarray) -> complex:
    """Determinant by LU with partial pivoting; tiny pivots are rejected."""
    a = block.copy()
    n = a.shape[0]
    det = 1.0 + 0j
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        pivot = a[p, k]
        if abs(pivot) < _PIVOT_FLOOR:
            raise DomainError("truncation unstable, increase N or shrink symbol")
        if p != k:
            a[[k, p]] = a[[p, k]]
            det = -det
        det *= pivot
        if k + 1 < n:
            factors = a[k + 1:, k] / pivot
            a[k + 1:, k + 1:] -= np.outer(factors, a[k, k + 1:])
    return det


def default_buffer(f: TrigPoly, g: TrigPoly, eps: float = 1e-14) -> int:
    span = max(1, f.span(), g.span())
    return 4 * span * math.ceil(math.log(1.0 / eps) / math.log(2.0))


def numeric_det_invariant(f: TrigPoly, g: TrigPoly, size: int,
                          buffer: int | None = None) -> complex:
    """Determinant of the leading size x size block of the truncated
    commutator T_{e^f} T_{e^g} T_{e^f}^{-1} T_{e^g}^{-1}.

    Converges to ``closed_form_di(f, g)`` as the size grows.
    """
    if size < 16:
        raise DomainError("size below the supported minimum of 16")
    if buffer is None:
        buffer = default_buffer(f, g)
    total = size + buffer

    def factors(poly: TrigPoly):
        lower_exp = poly.part("minus")
        upper_exp = poly.part("zero") + poly.part("plus")
        lo = exp_symbol_coeffs(lower_exp, total - 1)
        up = exp_symbol_coeffs(upper_exp, total - 1)
        lo_inv = exp_symbol_coeffs(-lower_exp, total - 1)
        up_inv = exp_symbol_coeffs(-upper_exp, total - 1)
        return lo, up, lo_inv, up_inv

    f_lo, f_up, f_lo_inv, f_up_inv = factors(f)
    g_lo, g_up, g_lo_inv, g_up_inv = factors(g)

    significant = 0
    for coeffs in (f_lo, f_up, f_lo_inv, f_up_inv, g_lo, g_up, g_lo_inv, g_up_inv):
        for k, v in coeffs.items():
            if abs(v) > 1e-14 and abs(k) > significant:
                significant = abs(k)
    if buffer < 2 * significant:
        raise DomainError("buffer too small for the exponential coefficient span")

    op_a = toeplitz_matrix(f_lo, total) @ toeplitz_matrix(f_up, total)
    op_b = toeplitz_matrix(g_lo, total) @ toeplitz_matrix(g_up, total)
    op_a_inv = toeplitz_matrix(f_up_inv, total) @ toeplitz_matrix(f_lo_inv, total)
    op_b_inv = toeplitz_matrix(g_up_inv, total) @ toeplitz_matrix(g_lo_inv, total)

    product = op_a @ op_b @ op_a_inv @ op_b_inv
    return _lu_determinant(product[:size, :size])
